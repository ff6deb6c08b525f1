#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "anisolp/generators.hpp"
#include "anisolp/spaces.hpp"

namespace anisolp {

enum class SymbolClass { Radial, Aniso, Product };

// One separable piece c(x) m(xi); both callable anywhere (FD probes step off
// the grid in x and to neighbouring integers in xi).
struct SymbolTerm {
  std::function<cd(const std::vector<double>&)> c;
  std::function<cd(const std::vector<int>&)> m;
};

struct Symbol {
  std::string name;
  SymbolClass klass = SymbolClass::Radial;
  double m1 = 0;  // order; Radial uses m1 only
  double m2 = 0;
  std::vector<SymbolTerm> terms;
  std::function<cd(const std::vector<double>&, const std::vector<int>&)> dense;

  bool separable() const { return !terms.empty(); }

  cd eval(const std::vector<double>& x, const std::vector<int>& xi) const {
    if (separable()) {
      cd s(0, 0);
      for (const auto& t : terms) s += t.c(x) * t.m(xi);
      return s;
    }
    if (!dense) throw std::logic_error("symbol has no evaluator");
    return dense(x, xi);
  }
};

// ---------------------------------------------------------------------------
// built-ins

namespace detail {

inline cd one_x(const std::vector<double>&) { return cd(1, 0); }
inline cd one_xi(const std::vector<int>&) { return cd(1, 0); }

inline double abs2_range(const std::vector<int>& xi, std::size_t lo, std::size_t hi) {
  double s = 0;
  for (std::size_t d = lo; d < hi; ++d) s += sqr(xi[d]);
  return s;
}

}  // namespace detail

inline Symbol sym_one() {
  Symbol a;
  a.name = "one";
  a.klass = SymbolClass::Radial;
  a.terms = {{detail::one_x, detail::one_xi}};
  return a;
}

inline Symbol sym_bessel(double s) {
  Symbol a;
  a.name = "bessel";
  a.klass = SymbolClass::Radial;
  a.m1 = s;
  a.terms = {{detail::one_x, [s](const std::vector<int>& xi) {
                return cd(std::pow(bracket(detail::abs2_range(xi, 0, xi.size())), s), 0);
              }}};
  return a;
}

// <xi^(2)>^s; needs the factor split, so it takes n1 at construction.
inline Symbol sym_bessel2(double s, int n1) {
  Symbol a;
  a.name = "bessel2";
  a.klass = SymbolClass::Aniso;
  a.m2 = s;
  a.terms = {{detail::one_x, [s, n1](const std::vector<int>& xi) {
                return cd(std::pow(bracket(detail::abs2_range(xi, n1, xi.size())), s), 0);
              }}};
  return a;
}

// <xi>^s / (<xi^(1)>^s + <xi^(2)>^s): order (0,0) in the product class.
inline Symbol sym_equiv_mult(double s, int n1) {
  Symbol a;
  a.name = "equiv_mult";
  a.klass = SymbolClass::Product;
  a.terms = {{detail::one_x, [s, n1](const std::vector<int>& xi) {
                const double full = bracket(detail::abs2_range(xi, 0, xi.size()));
                const double b1 = bracket(detail::abs2_range(xi, 0, n1));
                const double b2 = bracket(detail::abs2_range(xi, n1, xi.size()));
                return cd(std::pow(full, s) / (std::pow(b1, s) + std::pow(b2, s)), 0);
              }}};
  return a;
}

// <xi>^{-s1} <xi_{1..n-1}>^{s1} <xi^(2)>^{-s2} <xi_n>^{s2}: bounded with
// bounded inverse away from nothing; order (0,0) in the product class.
inline Symbol sym_jj(double s1, double s2, int n1) {
  Symbol a;
  a.name = "jj";
  a.klass = SymbolClass::Product;
  a.terms = {{detail::one_x, [s1, s2, n1](const std::vector<int>& xi) {
                const std::size_t n = xi.size();
                const double full = bracket(detail::abs2_range(xi, 0, n));
                const double head = bracket(detail::abs2_range(xi, 0, n - 1));
                const double f2 = bracket(detail::abs2_range(xi, n1, n));
                const double last = bracket(sqr(xi[n - 1]));
                return cd(std::pow(full, -s1) * std::pow(head, s1) * std::pow(f2, -s2) *
                              std::pow(last, s2),
                          0);
              }}};
  return a;
}

inline double cutoff_profile(const std::vector<double>& x, double c) {
  double v = 1;
  for (double xd : x) {
    const double dist = std::abs(std::remainder(xd - kPi, 2.0 * kPi));
    v *= lp_g(dist / c);
  }
  return v;
}

// x-only bump centred mid-cell, identically 1 within radius c per axis and 0
// beyond 2c; c <= pi/2 keeps it flat across the periodic seam.
inline Symbol sym_smooth_cutoff(double c) {
  if (!(c > 0.0 && c <= kPi / 2))
    throw std::invalid_argument("smooth_cutoff: need 0 < c <= pi/2");
  Symbol a;
  a.name = "smooth_cutoff";
  a.klass = SymbolClass::Radial;
  a.terms = {{[c](const std::vector<double>& x) { return cd(cutoff_profile(x, c), 0); },
              detail::one_xi}};
  return a;
}

inline Symbol sym_mixed(double c, double m) {
  if (!(c > 0.0 && c <= kPi / 2)) throw std::invalid_argument("mixed: need 0 < c <= pi/2");
  Symbol a;
  a.name = "mixed";
  a.klass = SymbolClass::Radial;
  a.m1 = m;
  a.terms = {{[c](const std::vector<double>& x) { return cd(cutoff_profile(x, c), 0); },
              [m](const std::vector<int>& xi) {
                return cd(std::pow(bracket(detail::abs2_range(xi, 0, xi.size())), m), 0);
              }}};
  return a;
}

// "name", "name:p" or "name:p,q"; n1 is the factor split of the target lattice.
inline Symbol parse_symbol(const std::string& spec, int n1) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::istringstream as(spec.substr(colon + 1));
    std::string piece;
    while (std::getline(as, piece, ',')) args.push_back(std::stod(piece));
  }
  auto want = [&](std::size_t k) {
    if (args.size() != k)
      throw std::invalid_argument("symbol " + name + ": expected " + std::to_string(k) +
                                  " parameter(s)");
  };
  if (name == "one") { want(0); return sym_one(); }
  if (name == "bessel") { want(1); return sym_bessel(args[0]); }
  if (name == "bessel2") { want(1); return sym_bessel2(args[0], n1); }
  if (name == "equiv_mult") { want(1); return sym_equiv_mult(args[0], n1); }
  if (name == "jj") { want(2); return sym_jj(args[0], args[1], n1); }
  if (name == "smooth_cutoff") { want(1); return sym_smooth_cutoff(args[0]); }
  if (name == "mixed") { want(2); return sym_mixed(args[0], args[1]); }
  throw std::invalid_argument("unknown symbol: " + spec);
}

// (a b)(x, xi); separable factors tensor into separable products.
inline Symbol symbol_product(const Symbol& a, const Symbol& b) {
  Symbol p;
  p.name = a.name + "*" + b.name;
  p.klass = a.klass == b.klass ? a.klass : SymbolClass::Product;
  p.m1 = a.m1 + b.m1;
  p.m2 = a.m2 + b.m2;
  if (a.separable() && b.separable()) {
    for (const auto& ta : a.terms)
      for (const auto& tb : b.terms)
        p.terms.push_back({[ca = ta.c, cb = tb.c](const std::vector<double>& x) {
                             return ca(x) * cb(x);
                           },
                           [ma = ta.m, mb = tb.m](const std::vector<int>& xi) {
                             return ma(xi) * mb(xi);
                           }});
  } else {
    p.dense = [a, b](const std::vector<double>& x, const std::vector<int>& xi) {
      return a.eval(x, xi) * b.eval(x, xi);
    };
  }
  return p;
}

// ---------------------------------------------------------------------------
// quantization: u(x) = sum_xi e^{+i x.xi} a(x, xi) t(xi) with t the
// coefficients of f in the e^{+i xi.x} expansion. a == 1 is the identity.

inline Field quantize(const Symbol& a, const Field& f) {
  const Lattice& lat = f.lat;
  const Spectrum tc = synthesis_coeffs(f);

  if (a.separable()) {
    Field out(lat);
    std::vector<int> idx(lat.dim()), xi(lat.dim());
    std::vector<double> x(lat.dim());
    for (const auto& term : a.terms) {
      Spectrum s = tc;
      for (std::size_t r = 0; r < s.c.size(); ++r) {
        lat.unravel(r, idx.data());
        for (int d = 0; d < lat.dim(); ++d) xi[d] = lat.freq_of(d, idx[d]);
        s.c[r] *= term.m(xi);
      }
      const Field part = synth(s);
      for (std::size_t r = 0; r < out.v.size(); ++r) {
        lat.unravel(r, idx.data());
        for (int d = 0; d < lat.dim(); ++d) x[d] = lat.x_coord(d, idx[d]);
        out.v[r] += term.c(x) * part.v[r];
      }
    }
    return out;
  }

  // dense path, O(total^2); per-axis phase tables e^{i x_d xi_d}
  std::vector<std::vector<cd>> phase(lat.dim());
  for (int d = 0; d < lat.dim(); ++d) {
    const int N = lat.sizes[d];
    phase[d].resize(static_cast<std::size_t>(N) * N);
    for (int mx = 0; mx < N; ++mx)
      for (int mf = 0; mf < N; ++mf)
        phase[d][static_cast<std::size_t>(mx) * N + mf] =
            std::polar(1.0, lat.x_coord(d, mx) * lat.freq_of(d, mf));
  }
  Field out(lat);
  const std::size_t total = lat.total();
  parallel_for(total, [&](std::size_t rx) {
    std::vector<int> xidx(lat.dim()), fidx(lat.dim()), xi(lat.dim());
    std::vector<double> x(lat.dim());
    lat.unravel(rx, xidx.data());
    for (int d = 0; d < lat.dim(); ++d) x[d] = lat.x_coord(d, xidx[d]);
    std::vector<cd> row(total);
    for (std::size_t rf = 0; rf < total; ++rf) {
      lat.unravel(rf, fidx.data());
      cd ph(1, 0);
      for (int d = 0; d < lat.dim(); ++d) {
        xi[d] = lat.freq_of(d, fidx[d]);
        ph *= phase[d][static_cast<std::size_t>(xidx[d]) * lat.sizes[d] + fidx[d]];
      }
      row[rf] = ph * a.eval(x, xi) * tc.c[rf];
    }
    out.v[rx] = pairwise_sum(row);
  });
  return out;
}

// L2 adjoint of quantize(a, .) for separable a.
inline Field adjoint_quantize(const Symbol& a, const Field& f) {
  if (!a.separable()) throw std::invalid_argument("adjoint needs a separable symbol");
  const Lattice& lat = f.lat;
  Field out(lat);
  std::vector<int> idx(lat.dim()), xi(lat.dim());
  std::vector<double> x(lat.dim());
  for (const auto& term : a.terms) {
    Field g(lat);
    for (std::size_t r = 0; r < g.v.size(); ++r) {
      lat.unravel(r, idx.data());
      for (int d = 0; d < lat.dim(); ++d) x[d] = lat.x_coord(d, idx[d]);
      g.v[r] = std::conj(term.c(x)) * f.v[r];
    }
    Spectrum s = synthesis_coeffs(g);
    for (std::size_t r = 0; r < s.c.size(); ++r) {
      lat.unravel(r, idx.data());
      for (int d = 0; d < lat.dim(); ++d) xi[d] = lat.freq_of(d, idx[d]);
      s.c[r] *= std::conj(term.m(xi));
    }
    add_into(out, synth(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// symbol class seminorms via 4th-order centred differences

namespace detail {

// first-derivative stencil, offsets -2..2, exact on cubics
inline constexpr double kFD4[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};

inline cd symbol_fd(const Symbol& a, const Lattice& lat, std::vector<double>& x,
                    std::vector<int>& xi, std::vector<int>& alpha, std::vector<int>& beta) {
  for (int d = 0; d < lat.dim(); ++d) {
    if (alpha[d] > 0) {
      --alpha[d];
      cd acc(0, 0);
      for (int off = -2; off <= 2; ++off) {
        if (off == 0) continue;
        xi[d] += off;
        acc += kFD4[off + 2] * symbol_fd(a, lat, x, xi, alpha, beta);
        xi[d] -= off;
      }
      ++alpha[d];
      return acc;  // step h = 1 in the integer frequency
    }
  }
  for (int d = 0; d < lat.dim(); ++d) {
    if (beta[d] > 0) {
      --beta[d];
      const double h = 2.0 * kPi / lat.sizes[d];
      cd acc(0, 0);
      for (int off = -2; off <= 2; ++off) {
        if (off == 0) continue;
        x[d] += off * h;
        acc += kFD4[off + 2] * symbol_fd(a, lat, x, xi, alpha, beta);
        x[d] -= off * h;
      }
      ++beta[d];
      return acc / h;
    }
  }
  return a.eval(x, xi);
}

}  // namespace detail

// Decay weight the class prescribes for a xi-derivative of total split order.
inline double class_weight(const Symbol& a, const Lattice& lat, const std::vector<int>& xi,
                           const std::vector<int>& alpha) {
  int a1 = 0, a2 = 0;
  for (int d = 0; d < lat.dim(); ++d) (d < lat.n1 ? a1 : a2) += alpha[d];
  const double full = bracket(detail::abs2_range(xi, 0, xi.size()));
  const double b1 = bracket(detail::abs2_range(xi, 0, lat.n1));
  const double b2 = bracket(detail::abs2_range(xi, lat.n1, xi.size()));
  switch (a.klass) {
    case SymbolClass::Radial:
      return std::pow(full, a.m1 - (a1 + a2));
    case SymbolClass::Aniso:
      return std::pow(full, a.m1 - a1) * std::pow(b2, a.m2 - a2);
    case SymbolClass::Product:
      return std::pow(b1, a.m1 - a1) * std::pow(b2, a.m2 - a2);
  }
  return 1;
}

// sup over grid x and stencil-admissible xi of |D^{alpha,beta} a| / weight.
inline double seminorm(const Symbol& a, const Lattice& lat, const std::vector<int>& alpha,
                       const std::vector<int>& beta) {
  if (static_cast<int>(alpha.size()) != lat.dim() || static_cast<int>(beta.size()) != lat.dim())
    throw std::invalid_argument("seminorm: order vectors must match dim");
  const std::size_t total = lat.total();
  std::vector<int> idx(lat.dim());
  bool any = false;
  double sup = 0;

  std::vector<int> xi(lat.dim());
  std::vector<double> x(lat.dim());
  std::vector<int> al = alpha, be = beta;
  for (std::size_t rf = 0; rf < total; ++rf) {
    lat.unravel(rf, idx.data());
    bool ok = true;
    for (int d = 0; d < lat.dim(); ++d) {
      xi[d] = lat.freq_of(d, idx[d]);
      if (xi[d] - 2 * alpha[d] < -lat.sizes[d] / 2 || xi[d] + 2 * alpha[d] > lat.sizes[d] / 2 - 1)
        ok = false;
    }
    if (!ok) continue;
    any = true;
    const double w = class_weight(a, lat, xi, alpha);
    for (std::size_t rx = 0; rx < total; ++rx) {
      lat.unravel(rx, idx.data());
      for (int d = 0; d < lat.dim(); ++d) x[d] = lat.x_coord(d, idx[d]);
      sup = std::max(sup, std::abs(detail::symbol_fd(a, lat, x, xi, al, be)) / w);
    }
  }
  if (!any) throw std::domain_error("seminorm: no stencil-admissible frequencies");
  return sup;
}

// ---------------------------------------------------------------------------
// operator norm probing

struct OpBoundReport {
  double best = 0;
  double via_random = 0;
  double via_shells = 0;
  double via_power = 0;
};

inline OpBoundReport boundedness_probe(const Symbol& a, const SpaceSpec& source,
                                       const SpaceSpec& target, const Lattice& lat, int trials,
                                       std::uint64_t seed, int power_iters = 24) {
  OpBoundReport rep;
  SplitMix64 master(seed);
  auto ratio_of = [&](const Field& f) {
    const double den = norm(f, source, Backend::Multiplier).value;
    if (den == 0) return 0.0;
    return norm(quantize(a, f), target, Backend::Multiplier).value / den;
  };

  Field best_f;
  double best_seen = -1;
  for (int t = 0; t < trials; ++t) {
    Field f = gen_random_smooth(lat, master.next());
    const double r = ratio_of(f);
    rep.via_random = std::max(rep.via_random, r);
    if (r > best_seen) {
      best_seen = r;
      best_f = std::move(f);
    }
  }
  const int J = lp_jmax(lat, WeightScope::Full);
  for (int j = 0; j <= J; ++j) {
    Field f = gen_random_shell(lat, master.next(), j);
    const double r = ratio_of(f);
    rep.via_shells = std::max(rep.via_shells, r);
    if (r > best_seen) {
      best_seen = r;
      best_f = std::move(f);
    }
  }
  rep.best = std::max(rep.via_random, rep.via_shells);

  if (a.separable() && power_iters > 0 && !best_f.v.empty()) {
    auto w_target = [&](const std::vector<int>& xi) { return space_weight2(lat, target, xi); };
    auto w_source_inv = [&](const std::vector<int>& xi) {
      return 1.0 / space_weight2(lat, source, xi);
    };
    Field g = best_f;
    for (int it = 0; it < power_iters; ++it) {
      Field h = quantize(a, g);
      h = apply_multiplier(h, w_target);
      Field k = adjoint_quantize(a, h);
      g = apply_multiplier(k, w_source_inv);
      const double ng = norm(g, source, Backend::Multiplier).value;
      if (ng == 0) break;
      for (auto& z : g.v) z /= ng;
      rep.via_power = std::max(rep.via_power, ratio_of(g));
    }
    rep.best = std::max(rep.best, rep.via_power);
  }
  return rep;
}

// Exhaustive cross-check at small sizes: materialize the operator in the
// frequency basis and power-iterate the weighted matrix.
inline double dense_opnorm(const Symbol& a, const SpaceSpec& source, const SpaceSpec& target,
                           const Lattice& lat, int iters = 400, std::uint64_t seed = 1) {
  const std::size_t total = lat.total();
  std::vector<std::vector<cd>> col(total);
  std::vector<int> idx(lat.dim()), xi(lat.dim());
  std::vector<double> wt(total), wsinv(total);
  for (std::size_t r = 0; r < total; ++r) {
    lat.unravel(r, idx.data());
    for (int d = 0; d < lat.dim(); ++d) xi[d] = lat.freq_of(d, idx[d]);
    wt[r] = std::sqrt(space_weight2(lat, target, xi));
    wsinv[r] = 1.0 / std::sqrt(space_weight2(lat, source, xi));
  }
  for (std::size_t q = 0; q < total; ++q) {
    Spectrum e(lat);
    e.c[q] = cd(1, 0);
    const Spectrum out = synthesis_coeffs(quantize(a, synth(e)));
    col[q] = out.c;
    // weighted: A[r][q] = wt[r] K[r][q] wsinv[q]
    for (std::size_t r = 0; r < total; ++r) col[q][r] *= wt[r] * wsinv[q];
  }
  SplitMix64 rng(seed);
  std::vector<cd> v(total), Av(total);
  for (auto& z : v) z = rng.unit_phase();
  double sigma = 0;
  for (int it = 0; it < iters; ++it) {
    std::fill(Av.begin(), Av.end(), cd(0, 0));
    for (std::size_t q = 0; q < total; ++q) {
      const cd vq = v[q];
      if (vq == cd(0, 0)) continue;
      const auto& cq = col[q];
      for (std::size_t r = 0; r < total; ++r) Av[r] += cq[r] * vq;
    }
    // v <- A^* A v
    std::vector<cd> w(total, cd(0, 0));
    for (std::size_t q = 0; q < total; ++q) {
      const auto& cq = col[q];
      cd acc(0, 0);
      for (std::size_t r = 0; r < total; ++r) acc += std::conj(cq[r]) * Av[r];
      w[q] = acc;
    }
    double nw = 0, nv = 0;
    for (std::size_t r = 0; r < total; ++r) {
      nw += std::norm(w[r]);
      nv += std::norm(v[r]);
    }
    if (nw == 0) return 0;
    sigma = 0;
    double na = 0;
    for (std::size_t r = 0; r < total; ++r) na += std::norm(Av[r]);
    sigma = std::sqrt(na / nv);
    const double inv = 1.0 / std::sqrt(nw);
    for (std::size_t r = 0; r < total; ++r) v[r] = w[r] * inv;
  }
  return sigma;
}

// max_t || Op_a Op_b f - Op_{ab} f ||_{L2} / || f ||_{L2} over shell-j probes.
inline double composition_remainder(const Symbol& a, const Symbol& b, int j, const Lattice& lat,
                                    int trials, std::uint64_t seed) {
  const Symbol ab = symbol_product(a, b);
  SplitMix64 master(seed);
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    Field f = gen_random_shell(lat, master.next(), j);
    const double nf = lp_norm(f, 2.0);
    if (nf == 0) continue;
    Field lhs = quantize(a, quantize(b, f));
    Field rhs = quantize(ab, f);
    add_into(lhs, rhs, cd(-1, 0));
    worst = std::max(worst, lp_norm(lhs, 2.0) / nf);
  }
  return worst;
}

}  // namespace anisolp
