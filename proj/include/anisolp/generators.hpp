#pragma once

#include <vector>

#include "anisolp/field.hpp"
#include "anisolp/littlewood_paley.hpp"
#include "anisolp/rng.hpp"

namespace anisolp {

// Random field with |coefficient| = <xi>^-(n/2+2) and seeded uniform phases;
// smooth enough that every norm in play is dominated by the low modes.
inline Field gen_random_smooth(const Lattice& lat, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Spectrum s(lat);
  std::vector<int> idx(lat.dim());
  const double expo = -(lat.dim() / 2.0 + 2.0);
  for (std::size_t r = 0; r < s.c.size(); ++r) {
    lat.unravel(r, idx.data());
    const double mag = std::pow(bracket(lat.freq_abs2_full(idx.data())), expo);
    s.c[r] = mag * rng.unit_phase();
  }
  return idft(s);
}

// f(x) = e^{i k.x}, sampled directly.
inline Field gen_mode(const Lattice& lat, const std::vector<int>& k) {
  if (static_cast<int>(k.size()) != lat.dim())
    throw std::invalid_argument("gen_mode: k length must equal dim");
  for (int d = 0; d < lat.dim(); ++d) {
    if (k[d] < -lat.sizes[d] / 2 || k[d] >= lat.sizes[d] / 2)
      throw std::invalid_argument("gen_mode: k outside representable range");
  }
  Field f(lat);
  std::vector<int> idx(lat.dim());
  for (std::size_t r = 0; r < f.v.size(); ++r) {
    lat.unravel(r, idx.data());
    double phase = 0;
    for (int d = 0; d < lat.dim(); ++d)
      phase += 2.0 * kPi * k[d] * static_cast<double>(idx[d]) / lat.sizes[d];
    f.v[r] = std::polar(1.0, phase);
  }
  return f;
}

// Inverse transform of the product bump phi_i(|xi^(1)|) phi_j(|xi^(2)|).
inline Field gen_bump(const Lattice& lat, int i, int j) {
  if (lat.n1 == 0 || lat.n2 == 0)
    throw std::invalid_argument("gen_bump: both factors must be nonempty");
  Spectrum s(lat);
  std::vector<int> idx(lat.dim());
  for (std::size_t r = 0; r < s.c.size(); ++r) {
    lat.unravel(r, idx.data());
    s.c[r] = lp_phi(i, std::sqrt(lat.freq_abs2_factor(1, idx.data()))) *
             lp_phi(j, std::sqrt(lat.freq_abs2_factor(2, idx.data())));
  }
  return idft(s);
}

// Random phases on one dyadic shell (coefficient = phi_j(|xi|_scope) * phase).
inline Field gen_random_shell(const Lattice& lat, std::uint64_t seed, int j,
                              WeightScope sc = WeightScope::Full) {
  SplitMix64 rng(seed);
  Spectrum s(lat);
  std::vector<int> idx(lat.dim());
  int lo, hi;
  scope_axis_range(lat, sc, lo, hi);
  for (std::size_t r = 0; r < s.c.size(); ++r) {
    lat.unravel(r, idx.data());
    double a2 = 0;
    for (int d = lo; d < hi; ++d) a2 += sqr(lat.freq_of(d, idx[d]));
    const cd ph = rng.unit_phase();  // consumed every slot to keep streams aligned
    const double w = lp_phi(j, std::sqrt(a2));
    s.c[r] = w == 0.0 ? cd(0, 0) : w * ph;
  }
  return idft(s);
}

}  // namespace anisolp
