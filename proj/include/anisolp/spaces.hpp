#pragma once

#include <string>
#include <vector>

#include "anisolp/field.hpp"
#include "anisolp/generators.hpp"
#include "anisolp/littlewood_paley.hpp"
#include "anisolp/rng.hpp"

namespace anisolp {

// H/B: radial scale s1. Haniso/Baniso: radial s1 after factor-2 smoothing s2.
// Fprod/Bprod: separate scales per factor. F-type counts blocks in l2 before
// the grid mean, B-type the other way around; at p=2 with these index choices
// the two agree.
enum class Family { H, B, Haniso, Baniso, Fprod, Bprod };

enum class Backend { LP, Multiplier };

struct SpaceSpec {
  Family family = Family::H;
  double s1 = 0;
  double s2 = 0;
  double p = 2;
};

struct NormReport {
  double value = 0;
  Backend backend = Backend::Multiplier;
  SpaceSpec spec;
  int blocks_used = 0;
};

inline std::string family_name(Family f) {
  switch (f) {
    case Family::H: return "H";
    case Family::B: return "B";
    case Family::Haniso: return "Haniso";
    case Family::Baniso: return "Baniso";
    case Family::Fprod: return "Fprod";
    case Family::Bprod: return "Bprod";
  }
  return "?";
}

inline Family family_from_name(const std::string& s) {
  if (s == "H") return Family::H;
  if (s == "B") return Family::B;
  if (s == "Haniso") return Family::Haniso;
  if (s == "Baniso") return Family::Baniso;
  if (s == "Fprod") return Family::Fprod;
  if (s == "Bprod") return Family::Bprod;
  throw std::invalid_argument("unknown space family: " + s);
}

// Squared spectral weight of the space at one frequency (p = 2 description).
inline double space_weight2(const Lattice& lat, const SpaceSpec& sp, const std::vector<int>& xi) {
  const double full2 = abs2_of(xi, 0, lat.dim());
  const double f12 = abs2_of(xi, 0, lat.n1);
  const double f22 = abs2_of(xi, lat.n1, lat.dim());
  switch (sp.family) {
    case Family::H:
    case Family::B:
      return std::pow(bracket(full2), 2 * sp.s1);
    case Family::Haniso:
    case Family::Baniso:
      return std::pow(bracket(full2), 2 * sp.s1) * std::pow(bracket(f22), 2 * sp.s2);
    case Family::Fprod:
    case Family::Bprod:
      return std::pow(bracket(f12), 2 * sp.s1) * std::pow(bracket(f22), 2 * sp.s2);
  }
  return 1;
}

namespace detail {

inline void require_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("need 1 < p < inf");
}

// F-type: l2 across weighted blocks pointwise, then the grid L^p mean.
inline double f_type_norm(const std::vector<DyadicBlock>& blocks,
                          const std::vector<double>& block_weight, double p,
                          std::size_t total) {
  std::vector<double> acc(total, 0.0);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& v = blocks[b].field.v;
    const double w2 = sqr(block_weight[b]);
    for (std::size_t r = 0; r < total; ++r) acc[r] += w2 * std::norm(v[r]);
  }
  std::vector<double> terms(total);
  for (std::size_t r = 0; r < total; ++r) terms[r] = std::pow(acc[r], p / 2.0);
  return std::pow(pairwise_sum(terms) / static_cast<double>(total), 1.0 / p);
}

// B-type: L^p per block, then the weighted block l^p sum.
inline double b_type_norm(const std::vector<DyadicBlock>& blocks,
                          const std::vector<double>& block_weight, double p) {
  std::vector<double> terms(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b)
    terms[b] = std::pow(block_weight[b] * lp_norm(blocks[b].field, p), p);
  return std::pow(pairwise_sum(terms), 1.0 / p);
}

}  // namespace detail

inline NormReport norm(const Field& f, const SpaceSpec& sp, Backend backend) {
  detail::require_p(sp.p);
  NormReport rep;
  rep.backend = backend;
  rep.spec = sp;

  if (backend == Backend::Multiplier) {
    if (sp.p != 2.0)
      throw std::invalid_argument("multiplier backend requires p = 2");
    const Spectrum s = dft(f);
    std::vector<double> terms(s.c.size());
    std::vector<int> idx(f.lat.dim()), xi(f.lat.dim());
    for (std::size_t r = 0; r < s.c.size(); ++r) {
      f.lat.unravel(r, idx.data());
      for (int d = 0; d < f.lat.dim(); ++d) xi[d] = f.lat.freq_of(d, idx[d]);
      terms[r] = space_weight2(f.lat, sp, xi) * std::norm(s.c[r]);
    }
    rep.value = std::sqrt(pairwise_sum(terms));
    return rep;
  }

  const bool aniso = sp.family == Family::Haniso || sp.family == Family::Baniso;
  const bool product = sp.family == Family::Fprod || sp.family == Family::Bprod;
  const bool btype = sp.family == Family::B || sp.family == Family::Baniso ||
                     sp.family == Family::Bprod;

  if (product) {
    ProductBlocks pb = product_blocks(f);
    std::vector<double> w(pb.blocks.size());
    for (std::size_t b = 0; b < pb.blocks.size(); ++b)
      w[b] = std::pow(2.0, pb.blocks[b].i * sp.s1 + pb.blocks[b].j * sp.s2);
    rep.blocks_used = static_cast<int>(pb.blocks.size());
    rep.value = btype ? detail::b_type_norm(pb.blocks, w, sp.p)
                      : detail::f_type_norm(pb.blocks, w, sp.p, f.lat.total());
    return rep;
  }

  const Field base = aniso ? bessel_potential(f, sp.s2, WeightScope::Factor2) : f;
  auto blocks = radial_blocks(base, WeightScope::Full);
  std::vector<double> w(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) w[b] = std::pow(2.0, blocks[b].j * sp.s1);
  rep.blocks_used = static_cast<int>(blocks.size());
  rep.value = btype ? detail::b_type_norm(blocks, w, sp.p)
                    : detail::f_type_norm(blocks, w, sp.p, f.lat.total());
  return rep;
}

// ---------------------------------------------------------------------------
// iterated (mixed) norms over the two factors

enum class PartKind { Lp, Hs };

struct MixedPart {
  PartKind kind = PartKind::Lp;
  double s = 0;
};

namespace detail {

inline Lattice factor_lattice(const Lattice& lat, int which) {
  if (which == 1) {
    if (lat.n1 == 0) throw std::invalid_argument("factor 1 is empty");
    return Lattice(std::vector<int>(lat.sizes.begin(), lat.sizes.begin() + lat.n1), lat.n1);
  }
  if (lat.n2 == 0) throw std::invalid_argument("factor 2 is empty");
  return Lattice(std::vector<int>(lat.sizes.begin() + lat.n1, lat.sizes.end()), 0);
}

// slice of the complementary factor at fixed index of factor `outer`
inline void gather_slice(const std::vector<cd>& v, std::size_t T1, std::size_t T2,
                         int outer_factor, std::size_t o, std::vector<cd>& out) {
  if (outer_factor == 1) {
    out.assign(v.begin() + o * T2, v.begin() + (o + 1) * T2);
  } else {
    out.resize(T1);
    for (std::size_t s = 0; s < T1; ++s) out[s] = v[s * T2 + o];
  }
}

inline double inner_part_value(const Field& slice, const MixedPart& part, double p) {
  if (part.kind == PartKind::Lp) return lp_norm(slice, p);
  if (p == 2.0) return norm(slice, SpaceSpec{Family::H, part.s, 0, 2}, Backend::Multiplier).value;
  return norm(slice, SpaceSpec{Family::H, part.s, 0, p}, Backend::LP).value;
}

}  // namespace detail

// Norm of x_outer -> || f(x_outer, .) || computed factor by factor. The outer
// part may be an L^p mean over grid points or (p = 2) a smoothness scale over
// the partially transformed outer frequencies.
inline double mixed_norm(const Field& f, int outer_factor, MixedPart outer, MixedPart inner,
                         double p) {
  detail::require_p(p);
  if (outer_factor != 1 && outer_factor != 2)
    throw std::invalid_argument("outer_factor must be 1 or 2");
  const Lattice latOut = detail::factor_lattice(f.lat, outer_factor);
  const Lattice latIn = detail::factor_lattice(f.lat, outer_factor == 1 ? 2 : 1);
  const std::size_t T1 = f.lat.total() / detail::factor_lattice(f.lat, 2).total();
  const std::size_t T2 = f.lat.total() / T1;
  const std::size_t T_out = latOut.total();

  std::vector<cd> slice;
  if (outer.kind == PartKind::Lp) {
    std::vector<double> terms(T_out);
    for (std::size_t o = 0; o < T_out; ++o) {
      detail::gather_slice(f.v, T1, T2, outer_factor, o, slice);
      terms[o] = std::pow(detail::inner_part_value(Field(latIn, slice), inner, p), p);
    }
    return std::pow(pairwise_sum(terms) / static_cast<double>(T_out), 1.0 / p);
  }

  if (p != 2.0) throw std::invalid_argument("outer smoothness part requires p = 2");
  std::vector<cd> w = f.v;
  std::vector<int> axes;
  for (int d = 0; d < f.lat.dim(); ++d)
    if ((outer_factor == 1) == f.lat.axis_in_factor1(d)) axes.push_back(d);
  transform_axes(w, f.lat, axes, +1);
  const double scale = 1.0 / static_cast<double>(T_out);
  for (auto& z : w) z *= scale;

  std::vector<double> terms(T_out);
  std::vector<int> oidx(latOut.dim());
  for (std::size_t o = 0; o < T_out; ++o) {
    detail::gather_slice(w, T1, T2, outer_factor, o, slice);
    const double nv = detail::inner_part_value(Field(latIn, slice), inner, 2.0);
    latOut.unravel(o, oidx.data());
    terms[o] = std::pow(bracket(latOut.freq_abs2_full(oidx.data())), 2 * outer.s) * sqr(nv);
  }
  return std::sqrt(pairwise_sum(terms));
}

// ---------------------------------------------------------------------------
// probes

// Overlap weight sum_{i,j} phi_i(|xi1|)^2 phi_j(|xi2|)^2; the exact p=2 factor
// between the block path and the plain spectral sum. Lies in [1/4, 1].
inline double prod_overlap_weight(const Lattice& lat, const std::vector<int>& xi) {
  const double m1 = std::sqrt(abs2_of(xi, 0, lat.n1));
  const double m2 = std::sqrt(abs2_of(xi, lat.n1, lat.dim()));
  const int imax = lp_jmax(lat, WeightScope::Factor1);
  const int jmax = lp_jmax(lat, WeightScope::Factor2);
  double w1 = 0, w2 = 0;
  for (int i = 0; i <= imax; ++i) w1 += sqr(lp_phi(i, m1));
  for (int j = 0; j <= jmax; ++j) w2 += sqr(lp_phi(j, m2));
  return w1 * w2;
}

struct ProdLPReport {
  double ratio_sup = 0;
  double ratio_inf = 0;
  double overlap_lo = 0;   // sqrt of min overlap weight on the lattice
  double overlap_hi = 0;
  double p2_identity_dev = 0;  // p=2 only: block path vs overlap-weighted sum
  int trials = 0;
};

inline ProdLPReport prodlp_equivalence_probe(const Lattice& lat, double p, int trials,
                                             std::uint64_t seed) {
  detail::require_p(p);
  ProdLPReport rep;
  rep.trials = trials;
  rep.ratio_inf = std::numeric_limits<double>::infinity();

  std::vector<double> overlap(lat.total());
  std::vector<int> idx(lat.dim()), xi(lat.dim());
  double wlo = std::numeric_limits<double>::infinity(), whi = 0;
  for (std::size_t r = 0; r < lat.total(); ++r) {
    lat.unravel(r, idx.data());
    for (int d = 0; d < lat.dim(); ++d) xi[d] = lat.freq_of(d, idx[d]);
    overlap[r] = prod_overlap_weight(lat, xi);
    wlo = std::min(wlo, overlap[r]);
    whi = std::max(whi, overlap[r]);
  }
  rep.overlap_lo = std::sqrt(wlo);
  rep.overlap_hi = std::sqrt(whi);

  SplitMix64 master(seed);
  for (int t = 0; t < trials; ++t) {
    const Field f = gen_random_smooth(lat, master.next());
    const double blockside = norm(f, SpaceSpec{Family::Fprod, 0, 0, p}, Backend::LP).value;
    const double plain = lp_norm(f, p);
    rep.ratio_sup = std::max(rep.ratio_sup, blockside / plain);
    rep.ratio_inf = std::min(rep.ratio_inf, blockside / plain);
    if (p == 2.0) {
      const Spectrum s = dft(f);
      std::vector<double> terms(s.c.size());
      for (std::size_t r = 0; r < s.c.size(); ++r) terms[r] = overlap[r] * std::norm(s.c[r]);
      const double direct = std::sqrt(pairwise_sum(terms));
      rep.p2_identity_dev = std::max(rep.p2_identity_dev, std::abs(blockside / direct - 1.0));
    }
  }
  return rep;
}

// || J^sig1 J_(2)^sig2 f ||_{(s1-sig1, s2-sig2)} / || f ||_{(s1,s2)}.
inline double lift_ratio(const Field& f, double s1, double s2, double sig1, double sig2,
                         double p, Backend backend) {
  const Field g = bessel_potential(bessel_potential(f, sig2, WeightScope::Factor2), sig1);
  const double num = norm(g, SpaceSpec{Family::Haniso, s1 - sig1, s2 - sig2, p}, backend).value;
  const double den = norm(f, SpaceSpec{Family::Haniso, s1, s2, p}, backend).value;
  return num / den;
}

struct EquivNormReport {
  double r1 = 0;  // intersection of plain smoothness norms vs the two-scale norm
  double r2 = 0;  // iterated-norm intersection vs the two-scale norm (p=2)
};

inline EquivNormReport equiv_norm_probe(const Field& f, double s1, double s2, double p,
                                        Backend backend) {
  EquivNormReport rep;
  const double den = norm(f, SpaceSpec{Family::Haniso, s1, s2, p}, backend).value;
  const double a = norm(f, SpaceSpec{Family::H, s1, 0, p}, backend).value;
  const double b =
      norm(bessel_potential(f, s2, WeightScope::Factor2), SpaceSpec{Family::H, s1, 0, p}, backend)
          .value;
  rep.r1 = (a + b) / den;
  if (p == 2.0) {
    const double m1 =
        mixed_norm(f, 1, MixedPart{PartKind::Lp, 0}, MixedPart{PartKind::Hs, s1 + s2}, 2.0);
    const double m2 =
        mixed_norm(f, 2, MixedPart{PartKind::Hs, s2}, MixedPart{PartKind::Hs, s1}, 2.0);
    rep.r2 = (m1 + m2) / den;
  }
  return rep;
}

struct InterpReport {
  double n0 = 0, n1 = 0, ntheta = 0;
  double defect = 0;      // ntheta - n0^{1-theta} n1^theta, <= 0 up to rounding
  double defect_rel = 0;  // defect / ntheta
};

// Spectral interpolation check between two p=2 spaces: the theta-space weight
// is the geometric mean of the endpoint weights.
inline InterpReport interp_inequality_check(const Field& f, const SpaceSpec& sp0,
                                            const SpaceSpec& sp1, double theta) {
  if (sp0.p != 2.0 || sp1.p != 2.0)
    throw std::invalid_argument("interpolation check is a p = 2 spectral computation");
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta in (0,1)");
  const Spectrum s = dft(f);
  std::vector<double> t0(s.c.size()), t1(s.c.size()), tt(s.c.size());
  std::vector<int> idx(f.lat.dim()), xi(f.lat.dim());
  for (std::size_t r = 0; r < s.c.size(); ++r) {
    f.lat.unravel(r, idx.data());
    for (int d = 0; d < f.lat.dim(); ++d) xi[d] = f.lat.freq_of(d, idx[d]);
    const double w0 = space_weight2(f.lat, sp0, xi);
    const double w1 = space_weight2(f.lat, sp1, xi);
    const double e = std::norm(s.c[r]);
    t0[r] = w0 * e;
    t1[r] = w1 * e;
    tt[r] = std::pow(w0, 1.0 - theta) * std::pow(w1, theta) * e;
  }
  InterpReport rep;
  rep.n0 = std::sqrt(pairwise_sum(t0));
  rep.n1 = std::sqrt(pairwise_sum(t1));
  rep.ntheta = std::sqrt(pairwise_sum(tt));
  rep.defect = rep.ntheta - std::pow(rep.n0, 1.0 - theta) * std::pow(rep.n1, theta);
  rep.defect_rel = rep.ntheta == 0 ? 0 : rep.defect / rep.ntheta;
  return rep;
}

}  // namespace anisolp
