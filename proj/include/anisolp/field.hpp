#pragma once

#include <functional>
#include <vector>

#include "anisolp/common.hpp"
#include "anisolp/fft.hpp"
#include "anisolp/lattice.hpp"

namespace anisolp {

struct Field {
  Lattice lat;
  std::vector<cd> v;  // row-major samples

  Field() = default;
  explicit Field(const Lattice& l) : lat(l), v(l.total(), cd(0, 0)) {}
  Field(const Lattice& l, std::vector<cd> data) : lat(l), v(std::move(data)) {
    if (v.size() != lat.total()) throw std::invalid_argument("Field: size mismatch");
  }
};

// Coefficients c with f(x) = sum_xi c(xi) e^{-i xi.x}; storage order matches
// Lattice slot conventions. c(xi) = (1/Ntot) sum_x e^{+i xi.x} f(x).
struct Spectrum {
  Lattice lat;
  std::vector<cd> c;

  Spectrum() = default;
  explicit Spectrum(const Lattice& l) : lat(l), c(l.total(), cd(0, 0)) {}
  Spectrum(const Lattice& l, std::vector<cd> data) : lat(l), c(std::move(data)) {
    if (c.size() != lat.total()) throw std::invalid_argument("Spectrum: size mismatch");
  }
};

inline Spectrum dft(const Field& f) {
  Spectrum s(f.lat, f.v);
  transform_all(s.c, s.lat, +1);
  const double scale = 1.0 / static_cast<double>(f.lat.total());
  for (auto& z : s.c) z *= scale;
  return s;
}

inline Field idft(const Spectrum& s) {
  Field f(s.lat, s.c);
  transform_all(f.v, f.lat, -1);
  return f;
}

// Coefficients for the conjugate expansion f(x) = sum_xi t(xi) e^{+i xi.x};
// equals dft(f) evaluated at -xi (wrapped).
inline Spectrum synthesis_coeffs(const Field& f) {
  Spectrum s(f.lat, f.v);
  transform_all(s.c, s.lat, -1);
  const double scale = 1.0 / static_cast<double>(f.lat.total());
  for (auto& z : s.c) z *= scale;
  return s;
}

inline Field synth(const Spectrum& s) {
  Field f(s.lat, s.c);
  transform_all(f.v, f.lat, +1);
  return f;
}

// w receives the frequency vector of each slot.
template <class W>
void spectrum_scale(Spectrum& s, W&& w) {
  std::vector<int> idx(s.lat.dim()), xi(s.lat.dim());
  for (std::size_t r = 0; r < s.c.size(); ++r) {
    s.lat.unravel(r, idx.data());
    for (int d = 0; d < s.lat.dim(); ++d) xi[d] = s.lat.freq_of(d, idx[d]);
    s.c[r] *= w(xi);
  }
}

template <class W>
Field apply_multiplier(const Field& f, W&& w) {
  Spectrum s = dft(f);
  spectrum_scale(s, w);
  return idft(s);
}

inline Field apply_multiplier_table(const Field& f, const std::vector<cd>& w) {
  if (w.size() != f.lat.total()) throw std::invalid_argument("multiplier table size");
  Spectrum s = dft(f);
  for (std::size_t r = 0; r < s.c.size(); ++r) s.c[r] *= w[r];
  return idft(s);
}

inline double abs2_of(const std::vector<int>& xi, int lo, int hi) {
  double s = 0;
  for (int d = lo; d < hi; ++d) s += sqr(xi[d]);
  return s;
}

enum class WeightScope { Full, Factor1, Factor2 };

inline double scope_abs2(const Lattice& lat, WeightScope sc, const std::vector<int>& xi) {
  switch (sc) {
    case WeightScope::Full: return abs2_of(xi, 0, lat.dim());
    case WeightScope::Factor1: return abs2_of(xi, 0, lat.n1);
    case WeightScope::Factor2: return abs2_of(xi, lat.n1, lat.dim());
  }
  return 0;
}

// <xi>^s smoothing over the full frequency or one factor.
inline Field bessel_potential(const Field& f, double s, WeightScope sc = WeightScope::Full) {
  return apply_multiplier(f, [&](const std::vector<int>& xi) {
    return std::pow(bracket(scope_abs2(f.lat, sc, xi)), s);
  });
}

inline double lp_norm(const Field& f, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("lp_norm: need 1 < p < inf");
  std::vector<double> terms(f.v.size());
  for (std::size_t i = 0; i < f.v.size(); ++i) terms[i] = std::pow(std::abs(f.v[i]), p);
  return std::pow(pairwise_sum(terms) / static_cast<double>(f.v.size()), 1.0 / p);
}

inline double grid_max(const Field& f) {
  double m = 0;
  for (const auto& z : f.v) m = std::max(m, std::abs(z));
  return m;
}

inline double l2_norm_spectrum(const Spectrum& s) {
  std::vector<double> terms(s.c.size());
  for (std::size_t i = 0; i < s.c.size(); ++i) terms[i] = std::norm(s.c[i]);
  return std::sqrt(pairwise_sum(terms));
}

inline Field pointwise_mul(const Field& a, const Field& b) {
  if (!(a.lat == b.lat)) throw std::invalid_argument("pointwise_mul: lattice mismatch");
  Field out(a.lat);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = a.v[i] * b.v[i];
  return out;
}

inline Field& add_into(Field& acc, const Field& f, cd scale = cd(1, 0)) {
  if (!(acc.lat == f.lat)) throw std::invalid_argument("add_into: lattice mismatch");
  for (std::size_t i = 0; i < acc.v.size(); ++i) acc.v[i] += scale * f.v[i];
  return acc;
}

inline double linf_dist(const Field& a, const Field& b) {
  if (!(a.lat == b.lat)) throw std::invalid_argument("linf_dist: lattice mismatch");
  double m = 0;
  for (std::size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

inline double l2_dist(const Field& a, const Field& b) {
  if (!(a.lat == b.lat)) throw std::invalid_argument("l2_dist: lattice mismatch");
  std::vector<double> terms(a.v.size());
  for (std::size_t i = 0; i < a.v.size(); ++i) terms[i] = std::norm(a.v[i] - b.v[i]);
  return std::sqrt(pairwise_sum(terms) / static_cast<double>(a.v.size()));
}

}  // namespace anisolp
