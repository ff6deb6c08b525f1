#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "anisolp/generators.hpp"
#include "anisolp/spaces.hpp"

namespace anisolp {

enum class Rel { LL, SIM, GG };

// Exclusive trichotomy on d = i - i': the two indices interact as low-high,
// comparable, or high-low.
inline Rel classify(int i, int ip) {
  if (i < 0 || ip < 0) throw std::invalid_argument("classify: indices must be >= 0");
  const int d = i - ip;
  if (d <= -3) return Rel::LL;
  if (d >= 3) return Rel::GG;
  return Rel::SIM;
}

enum class CaseLabel { C1a, C1b, C1c, C1d, C2a, C2b, C2c, C3 };

inline const char* case_name(CaseLabel c) {
  switch (c) {
    case CaseLabel::C1a: return "1a";
    case CaseLabel::C1b: return "1b";
    case CaseLabel::C1c: return "1c";
    case CaseLabel::C1d: return "1d";
    case CaseLabel::C2a: return "2a";
    case CaseLabel::C2b: return "2b";
    case CaseLabel::C2c: return "2c";
    case CaseLabel::C3: return "3";
  }
  return "?";
}

// Which interaction case the block pair (f_{i,j}, g_{i',j'}) belongs to.
// Grouping is by the factor-2 pair (j, j'); within the dominant-j group the
// factor-1 pair decides the subcase, with 1a reserved for pairs whose
// factor-1 content sits entirely below the output scale j.
inline CaseLabel case_label(int i, int ip, int j, int jp) {
  switch (classify(j, jp)) {
    case Rel::LL:
      return CaseLabel::C3;
    case Rel::SIM:
      switch (classify(i, ip)) {
        case Rel::GG: return CaseLabel::C2a;
        case Rel::SIM: return CaseLabel::C2b;
        case Rel::LL: return CaseLabel::C2c;
      }
      break;
    case Rel::GG:
      switch (classify(i, ip)) {
        case Rel::GG: return i > j - 3 ? CaseLabel::C1b : CaseLabel::C1a;
        case Rel::SIM: return std::max(i, ip) > j - 3 ? CaseLabel::C1c : CaseLabel::C1a;
        case Rel::LL: return ip > j - 3 ? CaseLabel::C1d : CaseLabel::C1a;
      }
      break;
  }
  throw std::logic_error("case_label: unreachable");
}

inline constexpr std::array<CaseLabel, 8> kAllCases = {
    CaseLabel::C1a, CaseLabel::C1b, CaseLabel::C1c, CaseLabel::C1d,
    CaseLabel::C2a, CaseLabel::C2b, CaseLabel::C2c, CaseLabel::C3};

struct CasePartition {
  std::array<Field, 8> parts;

  Field& at(CaseLabel c) { return parts[static_cast<std::size_t>(c)]; }
  const Field& at(CaseLabel c) const { return parts[static_cast<std::size_t>(c)]; }
};

// Splits the pointwise product f g over all block pairs, each pair routed to
// exactly one case field. Summing the parts recovers f g.
inline CasePartition case_partition(const Field& f, const Field& g) {
  if (!(f.lat == g.lat)) throw std::invalid_argument("case_partition: lattice mismatch");
  const ProductBlocks F = product_blocks(f);
  const ProductBlocks G = product_blocks(g);
  CasePartition out;
  for (auto& p : out.parts) p = Field(f.lat);
  for (const auto& fb : F.blocks) {
    for (const auto& gb : G.blocks) {
      Field& dst = out.at(case_label(fb.i, gb.i, fb.j, gb.j));
      for (std::size_t r = 0; r < dst.v.size(); ++r)
        dst.v[r] += fb.field.v[r] * gb.field.v[r];
    }
  }
  return out;
}

// Closed-form accumulation of the 1a part: for each output scale j, the
// factor-2 shell of f at j times the fully low-passed g, both factor-1
// low-passed at j-3.
inline Field case1a_lowpass_form(const Field& f, const Field& g) {
  const int jmax2 = lp_jmax(f.lat, WeightScope::Factor2);
  Field acc(f.lat);
  for (int j = 3; j <= jmax2; ++j) {
    Field fpart = apply_multiplier(f, [&](const std::vector<int>& xi) {
      const double mag1 = std::sqrt(abs2_of(xi, 0, f.lat.n1));
      const double mag2 = std::sqrt(abs2_of(xi, f.lat.n1, f.lat.dim()));
      return lp_Phi(j - 3, mag1) * lp_phi(j, mag2);
    });
    Field gpart = apply_multiplier(g, [&](const std::vector<int>& xi) {
      const double mag1 = std::sqrt(abs2_of(xi, 0, g.lat.n1));
      const double mag2 = std::sqrt(abs2_of(xi, g.lat.n1, g.lat.dim()));
      return lp_Phi(j - 3, mag1) * lp_Phi(j - 3, mag2);
    });
    for (std::size_t r = 0; r < acc.v.size(); ++r) acc.v[r] += fpart.v[r] * gpart.v[r];
  }
  return acc;
}

// ---------------------------------------------------------------------------
// probes

struct MultBoundReport {
  double ratio_sup = 0;  // ||fg|| / (||f|| |g|_inf + ||g|| |f|_inf)
  std::array<double, 8> case_ratio{};  // ||case part|| / (||dominant|| |other|_inf)
  int trials = 0;
};

// Dominant side per case for the one-sided estimates (1d and 3 are the hard
// directions and are reported against f and g respectively, for the record).
inline int case_dominant_is_f(CaseLabel c) {
  return c == CaseLabel::C2c || c == CaseLabel::C3 ? 0 : 1;
}

inline MultBoundReport mult_bound_probe(const Lattice& lat, double s1, double s2, int trials,
                                        std::uint64_t seed) {
  MultBoundReport rep;
  rep.trials = trials;
  const SpaceSpec sp{Family::Haniso, s1, s2, 2};
  SplitMix64 master(seed);
  for (int t = 0; t < trials; ++t) {
    const Field f = gen_random_smooth(lat, master.next());
    const Field g = gen_random_smooth(lat, master.next());
    const Field fg = pointwise_mul(f, g);
    const double nf = norm(f, sp, Backend::Multiplier).value;
    const double ng = norm(g, sp, Backend::Multiplier).value;
    const double mf = grid_max(f), mg = grid_max(g);
    rep.ratio_sup = std::max(
        rep.ratio_sup, norm(fg, sp, Backend::Multiplier).value / (nf * mg + ng * mf));

    const CasePartition cp = case_partition(f, g);
    for (CaseLabel c : kAllCases) {
      const double npart = norm(cp.at(c), sp, Backend::Multiplier).value;
      const double den = case_dominant_is_f(c) ? nf * mg : ng * mf;
      auto& slot = rep.case_ratio[static_cast<std::size_t>(c)];
      slot = std::max(slot, npart / den);
    }
  }
  return rep;
}

struct SharpnessPoint {
  int i = 0, j = 0, ip = 0, jp = 0;
  double f2 = 0, g2 = 0, fg2 = 0;              // log2 of squared norms
  double pred_f2 = 0, pred_g2 = 0, pred_fg2 = 0;  // scale parts of the model
};

// One bump-pair measurement. f = bump(i,j) in (s1, s2'), g = bump(i',j') in
// (s1, s2''), product in (s1, s2). Model exponents follow the scaling of the
// shell volumes and weights; valid for j' <= j <= i' orderings.
inline SharpnessPoint sharpness_point(const Lattice& lat, int i, int j, int ip, int jp, double s1,
                                      double s2p, double s2pp, double s2) {
  SharpnessPoint pt;
  pt.i = i;
  pt.j = j;
  pt.ip = ip;
  pt.jp = jp;
  const Field f = gen_bump(lat, i, j);
  const Field g = gen_bump(lat, ip, jp);
  const Field fg = pointwise_mul(f, g);
  const double nf = norm(f, SpaceSpec{Family::Haniso, s1, s2p, 2}, Backend::Multiplier).value;
  const double ng = norm(g, SpaceSpec{Family::Haniso, s1, s2pp, 2}, Backend::Multiplier).value;
  const double nfg = norm(fg, SpaceSpec{Family::Haniso, s1, s2, 2}, Backend::Multiplier).value;
  pt.f2 = 2 * std::log2(nf);
  pt.g2 = 2 * std::log2(ng);
  pt.fg2 = 2 * std::log2(nfg);
  const double n1 = lat.n1, n2 = lat.n2;
  pt.pred_f2 = 2 * s1 * std::max(i, j) + 2 * s2p * j + i * n1 + j * n2;
  pt.pred_g2 = 2 * s1 * ip + 2 * s2pp * jp + ip * n1 + jp * n2;
  pt.pred_fg2 = 2 * s1 * ip + 2 * s2 * j + (2 * i + ip) * n1 + (2 * jp + j) * n2;
  return pt;
}

struct SharpnessReport {
  std::vector<SharpnessPoint> points;
  double slope_f2 = 0, slope_g2 = 0, slope_fg2 = 0;
  double pred_slope_f2 = 0, pred_slope_g2 = 0, pred_slope_fg2 = 0;
};

// Sweep j with i, j' fixed and i' = j + 3 (so the ordering j' <= j <= i'
// holds); slopes of the three log2 squared norms against j.
inline SharpnessReport sharpness_sweep(const Lattice& lat, int i, int jp,
                                       const std::vector<int>& js, double s1, double s2p,
                                       double s2pp, double s2) {
  SharpnessReport rep;
  std::vector<double> xs, yf, yg, yfg, pf, pg, pfg;
  for (int j : js) {
    SharpnessPoint pt = sharpness_point(lat, i, j, j + 3, jp, s1, s2p, s2pp, s2);
    xs.push_back(j);
    yf.push_back(pt.f2);
    yg.push_back(pt.g2);
    yfg.push_back(pt.fg2);
    pf.push_back(pt.pred_f2);
    pg.push_back(pt.pred_g2);
    pfg.push_back(pt.pred_fg2);
    rep.points.push_back(pt);
  }
  rep.slope_f2 = fit_slope(xs, yf);
  rep.slope_g2 = fit_slope(xs, yg);
  rep.slope_fg2 = fit_slope(xs, yfg);
  rep.pred_slope_f2 = fit_slope(xs, pf);
  rep.pred_slope_g2 = fit_slope(xs, pg);
  rep.pred_slope_fg2 = fit_slope(xs, pfg);
  return rep;
}

// log2 of ||fg||^2 / (||f||^2 ||g||^2) along i = j = m, i' = m+3, j' = m-3;
// the fitted slope is 2 (s2 - s2*) with s2* = s1 + s2' + s2'' - (n1+n2)/2.
inline double threshold_contrast_slope(const Lattice& lat, const std::vector<int>& ms, double s1,
                                       double s2p, double s2pp, double s2) {
  std::vector<double> xs, ys;
  for (int m : ms) {
    const SharpnessPoint pt = sharpness_point(lat, m, m, m + 3, m - 3, s1, s2p, s2pp, s2);
    xs.push_back(m);
    ys.push_back(pt.fg2 - pt.f2 - pt.g2);
  }
  return fit_slope(xs, ys);
}

}  // namespace anisolp
