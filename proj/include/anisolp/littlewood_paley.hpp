#pragma once

#include <vector>

#include "anisolp/field.hpp"

namespace anisolp {

inline double lp_chi(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

// Smooth drop from 1 to 0 across [1,2]; exactly 1 for t <= 1, exactly 0 for t >= 2.
inline double lp_g(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double a = lp_chi(2.0 - t);
  const double b = lp_chi(t - 1.0);
  return a / (a + b);
}

// phi_0 = g; phi_j(t) = g(2^{-j}t) - g(2^{1-j}t) for j >= 1, supported in
// [2^{j-1}, 2^{j+1}]. Consecutive pieces share the same evaluations of g, so
// partial sums telescope to g(2^{-J}t) up to a few ulp.
inline double lp_phi(int j, double t) {
  if (j < 0) throw std::invalid_argument("lp_phi: j >= 0");
  if (j == 0) return lp_g(t);
  return lp_g(std::ldexp(t, -j)) - lp_g(std::ldexp(t, 1 - j));
}

// Low-pass partial sum sum_{j<=i} phi_j = g(2^{-i} t).
inline double lp_Phi(int i, double t) { return lp_g(std::ldexp(t, -i)); }

inline void scope_axis_range(const Lattice& lat, WeightScope sc, int& lo, int& hi) {
  lo = sc == WeightScope::Factor2 ? lat.n1 : 0;
  hi = sc == WeightScope::Factor1 ? lat.n1 : lat.dim();
  if (lo >= hi) throw std::invalid_argument("scope has no axes on this lattice");
}

// Smallest J with g(2^{-J} |xi|) == 1 on every representable frequency, so the
// dyadic family phi_0..phi_J sums to exactly 1 on the whole lattice.
inline int lp_jmax(const Lattice& lat, WeightScope sc) {
  int lo, hi;
  scope_axis_range(lat, sc, lo, hi);
  const double M = lat.max_freq_abs(lo, hi);
  return static_cast<int>(std::ceil(std::log2(M))) + 1;
}

// max over the lattice of |sum_j phi_j(|xi|_scope) - 1|
inline double partition_defect(const Lattice& lat, WeightScope sc) {
  const int J = lp_jmax(lat, sc);
  std::vector<int> idx(lat.dim());
  double worst = 0;
  for (std::size_t r = 0; r < lat.total(); ++r) {
    lat.unravel(r, idx.data());
    double a2 = 0;
    int lo, hi;
    scope_axis_range(lat, sc, lo, hi);
    for (int d = lo; d < hi; ++d) a2 += sqr(lat.freq_of(d, idx[d]));
    const double t = std::sqrt(a2);
    double s = 0;
    for (int j = 0; j <= J; ++j) s += lp_phi(j, t);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

struct DyadicBlock {
  int i = -1;  // factor-1 index; -1 for radial blocks
  int j = 0;
  Field field;
};

inline std::vector<DyadicBlock> radial_blocks(const Field& f, WeightScope sc) {
  const int J = lp_jmax(f.lat, sc);
  const Spectrum base = dft(f);
  std::vector<DyadicBlock> out;
  out.reserve(J + 1);
  std::vector<int> idx(f.lat.dim());
  int lo, hi;
  scope_axis_range(f.lat, sc, lo, hi);
  for (int j = 0; j <= J; ++j) {
    Spectrum s = base;
    for (std::size_t r = 0; r < s.c.size(); ++r) {
      s.lat.unravel(r, idx.data());
      double a2 = 0;
      for (int d = lo; d < hi; ++d) a2 += sqr(s.lat.freq_of(d, idx[d]));
      s.c[r] *= lp_phi(j, std::sqrt(a2));
    }
    out.push_back(DyadicBlock{-1, j, idft(s)});
  }
  return out;
}

// Blocks phi_i(|xi^(1)|) phi_j(|xi^(2)|), i = 0..imax, j = 0..jmax, row-major in (i,j).
struct ProductBlocks {
  int imax = 0;
  int jmax = 0;
  std::vector<DyadicBlock> blocks;

  const DyadicBlock& at(int i, int j) const {
    return blocks[static_cast<std::size_t>(i) * (jmax + 1) + j];
  }
};

inline ProductBlocks product_blocks(const Field& f) {
  if (f.lat.n1 == 0 || f.lat.n2 == 0)
    throw std::invalid_argument("product_blocks: both factors must be nonempty");
  ProductBlocks out;
  out.imax = lp_jmax(f.lat, WeightScope::Factor1);
  out.jmax = lp_jmax(f.lat, WeightScope::Factor2);
  const Spectrum base = dft(f);
  std::vector<int> idx(f.lat.dim());
  // cache the two radial magnitudes per slot
  std::vector<double> m1(f.lat.total()), m2(f.lat.total());
  for (std::size_t r = 0; r < f.lat.total(); ++r) {
    f.lat.unravel(r, idx.data());
    m1[r] = std::sqrt(f.lat.freq_abs2_factor(1, idx.data()));
    m2[r] = std::sqrt(f.lat.freq_abs2_factor(2, idx.data()));
  }
  for (int i = 0; i <= out.imax; ++i) {
    for (int j = 0; j <= out.jmax; ++j) {
      Spectrum s = base;
      for (std::size_t r = 0; r < s.c.size(); ++r)
        s.c[r] *= lp_phi(i, m1[r]) * lp_phi(j, m2[r]);
      out.blocks.push_back(DyadicBlock{i, j, idft(s)});
    }
  }
  return out;
}

// Low-pass in the factor-1 frequency only: multiplier g(2^{-i} |xi^(1)|).
inline Field factor1_lowpass(const Field& f, int i) {
  return apply_multiplier(f, [&](const std::vector<int>& xi) {
    return lp_Phi(i, std::sqrt(abs2_of(xi, 0, f.lat.n1)));
  });
}

inline bool in_radial_support(int j, double mag) {
  if (j == 0) return mag <= 2.0;
  return mag >= std::ldexp(1.0, j - 1) && mag <= std::ldexp(1.0, j + 1);
}

// Fraction of spectral l2 mass outside the declared dyadic support.
inline double support_leakage(const DyadicBlock& blk, WeightScope sc_radial = WeightScope::Full) {
  const Spectrum s = dft(blk.field);
  std::vector<int> idx(s.lat.dim());
  double inside = 0, outside = 0;
  for (std::size_t r = 0; r < s.c.size(); ++r) {
    s.lat.unravel(r, idx.data());
    bool ok;
    if (blk.i < 0) {
      int lo, hi;
      scope_axis_range(s.lat, sc_radial, lo, hi);
      double a2 = 0;
      for (int d = lo; d < hi; ++d) a2 += sqr(s.lat.freq_of(d, idx[d]));
      ok = in_radial_support(blk.j, std::sqrt(a2));
    } else {
      ok = in_radial_support(blk.i, std::sqrt(s.lat.freq_abs2_factor(1, idx.data()))) &&
           in_radial_support(blk.j, std::sqrt(s.lat.freq_abs2_factor(2, idx.data())));
    }
    (ok ? inside : outside) += std::norm(s.c[r]);
  }
  const double tot = inside + outside;
  return tot == 0 ? 0.0 : outside / tot;
}

}  // namespace anisolp
