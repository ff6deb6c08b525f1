#pragma once

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "anisolp/common.hpp"

namespace anisolp {

// Product grid (2*pi/N_0 Z) x ... with the first n1 axes forming factor 1 and
// the remaining n2 axes factor 2. Frequencies per axis run over
// {-N/2, ..., N/2 - 1} and are stored in standard transform order: storage
// slot m holds frequency m for m < N/2 and m - N otherwise.
struct Lattice {
  int n1 = 0;
  int n2 = 0;
  std::vector<int> sizes;

  Lattice() = default;
  Lattice(std::vector<int> sz, int nf1) : n1(nf1), sizes(std::move(sz)) {
    n2 = static_cast<int>(sizes.size()) - n1;
    validate();
  }

  void validate() const {
    if (n1 < 0 || n2 < 0 || n1 + n2 < 1)
      throw std::invalid_argument("Lattice: need n1,n2 >= 0 and n1+n2 >= 1");
    if (static_cast<int>(sizes.size()) != n1 + n2)
      throw std::invalid_argument("Lattice: sizes length must equal n1+n2");
    for (int N : sizes) {
      if (N < 4 || N % 2 != 0)
        throw std::invalid_argument("Lattice: every size must be even and >= 4, got " +
                                    std::to_string(N));
    }
  }

  int dim() const { return n1 + n2; }

  std::size_t total() const {
    std::size_t t = 1;
    for (int N : sizes) t *= static_cast<std::size_t>(N);
    return t;
  }

  int freq_of(int d, int m) const { return m < sizes[d] / 2 ? m : m - sizes[d]; }

  int slot_of_freq(int d, int k) const {
    const int N = sizes[d];
    if (k < -N / 2 || k >= N / 2)
      throw std::out_of_range("Lattice: frequency outside representable range");
    return k >= 0 ? k : k + N;
  }

  // Reduce an arbitrary integer mod N into {-N/2, ..., N/2-1}.
  int wrap_freq(int d, long long k) const {
    const long long N = sizes[d];
    long long r = ((k % N) + N) % N;
    return static_cast<int>(r < N / 2 ? r : r - N);
  }

  double x_coord(int d, int m) const { return 2.0 * kPi * m / sizes[d]; }

  // Row-major: axis 0 varies slowest.
  std::size_t stride(int d) const {
    std::size_t s = 1;
    for (int e = d + 1; e < dim(); ++e) s *= static_cast<std::size_t>(sizes[e]);
    return s;
  }

  void unravel(std::size_t r, int* idx) const {
    for (int d = dim() - 1; d >= 0; --d) {
      idx[d] = static_cast<int>(r % sizes[d]);
      r /= sizes[d];
    }
  }

  std::size_t ravel(const int* idx) const {
    std::size_t r = 0;
    for (int d = 0; d < dim(); ++d) r = r * sizes[d] + static_cast<std::size_t>(idx[d]);
    return r;
  }

  bool axis_in_factor1(int d) const { return d < n1; }

  // Squared frequency magnitude over all axes / one factor, from a storage index.
  double freq_abs2_full(const int* idx) const {
    double s = 0;
    for (int d = 0; d < dim(); ++d) s += sqr(freq_of(d, idx[d]));
    return s;
  }
  double freq_abs2_factor(int which, const int* idx) const {
    double s = 0;
    const int lo = which == 1 ? 0 : n1;
    const int hi = which == 1 ? n1 : dim();
    for (int d = lo; d < hi; ++d) s += sqr(freq_of(d, idx[d]));
    return s;
  }

  // Largest representable |xi| over a set of axes (per-axis peak is N/2).
  double max_freq_abs(int lo, int hi) const {
    double s = 0;
    for (int d = lo; d < hi; ++d) s += sqr(sizes[d] / 2);
    return std::sqrt(s);
  }

  Lattice remove_axis(int axis) const {
    if (axis < 0 || axis >= dim()) throw std::out_of_range("Lattice: bad axis");
    Lattice out;
    out.sizes = sizes;
    out.sizes.erase(out.sizes.begin() + axis);
    out.n1 = axis < n1 ? n1 - 1 : n1;
    out.n2 = axis < n1 ? n2 : n2 - 1;
    out.validate();
    return out;
  }

  Lattice insert_axis(int axis, int N, bool into_factor1) const {
    Lattice out;
    out.sizes = sizes;
    out.sizes.insert(out.sizes.begin() + axis, N);
    out.n1 = into_factor1 ? n1 + 1 : n1;
    out.n2 = into_factor1 ? n2 : n2 + 1;
    out.validate();
    return out;
  }

  bool operator==(const Lattice& o) const {
    return n1 == o.n1 && n2 == o.n2 && sizes == o.sizes;
  }
};

inline double bracket(double abs2) { return std::sqrt(1.0 + abs2); }

}  // namespace anisolp
