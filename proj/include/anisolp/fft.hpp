#pragma once

#include <vector>

#include "anisolp/common.hpp"
#include "anisolp/lattice.hpp"

namespace anisolp {
namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Per-length transform plan. sign=+1 computes out[j] = sum_m in[m] e^{+2*pi*i*j*m/n},
// sign=-1 the conjugate kernel. No normalization here.
struct TransformPlan {
  std::size_t n = 0;
  int sign = +1;
  bool pow2 = false;
  std::vector<std::vector<cd>> level_tw;  // pow2 path: twiddles per butterfly level
  std::vector<cd> roots;                  // naive path: e^{sign*2*pi*i*k/n}

  TransformPlan(std::size_t len, int sgn) : n(len), sign(sgn), pow2(is_pow2(len)) {
    if (pow2) {
      for (std::size_t half = 1; half < n; half <<= 1) {
        std::vector<cd> tw(half);
        const double base = sign * kPi / static_cast<double>(half);
        for (std::size_t j = 0; j < half; ++j)
          tw[j] = std::polar(1.0, base * static_cast<double>(j));
        level_tw.push_back(std::move(tw));
      }
    } else {
      roots.resize(n);
      for (std::size_t k = 0; k < n; ++k)
        roots[k] = std::polar(1.0, sign * 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
    }
  }

  void run(cd* a, std::vector<cd>& scratch) const {
    if (pow2) {
      for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
      }
      std::size_t lvl = 0;
      for (std::size_t half = 1; half < n; half <<= 1, ++lvl) {
        const auto& tw = level_tw[lvl];
        for (std::size_t blk = 0; blk < n; blk += 2 * half) {
          for (std::size_t j = 0; j < half; ++j) {
            const cd t = a[blk + j + half] * tw[j];
            const cd u = a[blk + j];
            a[blk + j] = u + t;
            a[blk + j + half] = u - t;
          }
        }
      }
    } else {
      scratch.assign(n, cd(0, 0));
      for (std::size_t j = 0; j < n; ++j) {
        cd s(0, 0);
        for (std::size_t m = 0; m < n; ++m) s += a[m] * roots[(j * m) % n];
        scratch[j] = s;
      }
      std::copy(scratch.begin(), scratch.end(), a);
    }
  }
};

}  // namespace detail

// Transform along one axis of a row-major multi-dimensional array, in place.
inline void transform_axis(std::vector<cd>& v, const Lattice& lat, int axis, int sign) {
  const std::size_t N = static_cast<std::size_t>(lat.sizes[axis]);
  const std::size_t stride = lat.stride(axis);
  const std::size_t total = lat.total();
  const detail::TransformPlan plan(N, sign);
  std::vector<cd> line(N), scratch;
  const std::size_t outer = total / (N * stride);
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base0 = o * N * stride;
    for (std::size_t i = 0; i < stride; ++i) {
      const std::size_t base = base0 + i;
      for (std::size_t t = 0; t < N; ++t) line[t] = v[base + t * stride];
      plan.run(line.data(), scratch);
      for (std::size_t t = 0; t < N; ++t) v[base + t * stride] = line[t];
    }
  }
}

inline void transform_axes(std::vector<cd>& v, const Lattice& lat,
                           const std::vector<int>& axes, int sign) {
  for (int d : axes) transform_axis(v, lat, d, sign);
}

inline void transform_all(std::vector<cd>& v, const Lattice& lat, int sign) {
  for (int d = 0; d < lat.dim(); ++d) transform_axis(v, lat, d, sign);
}

}  // namespace anisolp
