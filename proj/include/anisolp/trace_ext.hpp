#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "anisolp/field.hpp"
#include "anisolp/littlewood_paley.hpp"
#include "anisolp/rng.hpp"
#include "anisolp/spaces.hpp"

namespace anisolp {

namespace detail {

inline std::size_t source_slot(const Lattice& src, int axis, const int* bidx, int m) {
  std::size_t r = 0;
  int bd = 0;
  for (int d = 0; d < src.dim(); ++d) {
    const int coord = d == axis ? m : bidx[bd++];
    r = r * static_cast<std::size_t>(src.sizes[d]) + static_cast<std::size_t>(coord);
  }
  return r;
}

// signed wrapped offset of slot m from slot at, in (-N/2, N/2]
inline int wrapped_offset(int m, int at, int N) {
  const int d = ((m - at) % N + N) % N;
  return d > N / 2 ? d - N : d;
}

}  // namespace detail

struct TraceData {
  Lattice source;
  int axis = 0;
  int at = 0;
  Lattice boundary;
  std::vector<Field> components;  // k-th derivative along axis, restricted to the plane
};

// Restriction to the plane x_axis = x(at) together with the first m derivative
// components along that axis (computed spectrally).
inline TraceData trace(const Field& f, int m, int axis, int at) {
  const Lattice& lat = f.lat;
  if (axis < 0 || axis >= lat.dim()) throw std::out_of_range("trace: bad axis");
  if (at < 0 || at >= lat.sizes[axis]) throw std::out_of_range("trace: bad plane slot");
  if (m < 0) throw std::invalid_argument("trace: need m >= 0");
  TraceData td;
  td.source = lat;
  td.axis = axis;
  td.at = at;
  td.boundary = lat.remove_axis(axis);
  const Spectrum base = dft(f);
  std::vector<int> bidx(td.boundary.dim());
  for (int k = 0; k <= m; ++k) {
    Field fk;
    if (k == 0) {
      fk = idft(base);
    } else {
      Spectrum s = base;
      spectrum_scale(s, [&](const std::vector<int>& xi) {
        return std::pow(cd(0, -1) * static_cast<double>(xi[axis]), k);
      });
      fk = idft(s);
    }
    Field g(td.boundary);
    for (std::size_t rb = 0; rb < g.v.size(); ++rb) {
      td.boundary.unravel(rb, bidx.data());
      g.v[rb] = fk.v[detail::source_slot(lat, axis, bidx.data(), at)];
    }
    td.components.push_back(std::move(g));
  }
  return td;
}

// Frequency scope that carries the trace loss for a given traced axis: the
// full bracket when the axis sits in factor 1, the factor-2 bracket otherwise.
inline WeightScope trace_scope(const Lattice& src, int axis) {
  return axis < src.n1 ? WeightScope::Full : WeightScope::Factor2;
}

// Extension e_m: per tangential frequency eta, a Taylor polynomial in the
// signed distance t from the plane, cut off at |t| ~ 1/<eta> so each frequency
// only sees a collar of matching width.
inline Field extend(const TraceData& td) {
  const Lattice& src = td.source;
  const Lattice& b = td.boundary;
  if (td.components.empty()) throw std::invalid_argument("extend: no components");
  const int N = src.sizes[td.axis];
  const int K = static_cast<int>(td.components.size()) - 1;

  std::vector<Spectrum> gt;
  gt.reserve(td.components.size());
  for (const auto& g : td.components) {
    if (!(g.lat == b)) throw std::invalid_argument("extend: component lattice mismatch");
    gt.push_back(synthesis_coeffs(g));
  }

  const WeightScope sc = trace_scope(src, td.axis);
  std::vector<double> W(b.total());
  {
    std::vector<int> bidx(b.dim()), eta(b.dim());
    for (std::size_t rb = 0; rb < W.size(); ++rb) {
      b.unravel(rb, bidx.data());
      for (int d = 0; d < b.dim(); ++d) eta[d] = b.freq_of(d, bidx[d]);
      W[rb] = bracket(scope_abs2(b, sc, eta));
    }
  }

  Field u(src);
  std::vector<int> bidx(b.dim());
  for (int m = 0; m < N; ++m) {
    const int w = detail::wrapped_offset(m, td.at, N);
    const double t = 2.0 * kPi * w / N;
    Spectrum sl(b);
    for (std::size_t rb = 0; rb < sl.c.size(); ++rb) {
      const double chi = lp_g(W[rb] * std::abs(t));
      if (chi == 0.0) continue;
      cd acc(0, 0);
      double term = 1.0;  // t^k / k!
      for (int k = 0; k <= K; ++k) {
        acc += gt[static_cast<std::size_t>(k)].c[rb] * term;
        term *= t / (k + 1);
      }
      sl.c[rb] = acc * chi;
    }
    const Field slice = synth(sl);
    for (std::size_t rb = 0; rb < slice.v.size(); ++rb) {
      b.unravel(rb, bidx.data());
      u.v[detail::source_slot(src, td.axis, bidx.data(), m)] = slice.v[rb];
    }
  }
  return u;
}

// Coefficients c_r, r = 1..k+1, of the reflection F(t) = sum_r c_r f(-t/r)
// for t < 0: matching derivatives up to order k means
// sum_r c_r (-1/r)^j = 1 for j = 0..k.
inline std::vector<double> reflection_coeffs(int k) {
  if (k < 0 || k > 8) throw std::invalid_argument("reflection_coeffs: need 0 <= k <= 8");
  const int n = k + 1;
  std::vector<std::vector<double>> M(n, std::vector<double>(n + 1, 1.0));
  for (int j = 0; j < n; ++j)
    for (int r = 0; r < n; ++r) M[j][r] = std::pow(-1.0 / (r + 1), j);
  // gaussian elimination with partial pivoting
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int row = col + 1; row < n; ++row)
      if (std::abs(M[row][col]) > std::abs(M[piv][col])) piv = row;
    std::swap(M[col], M[piv]);
    for (int row = col + 1; row < n; ++row) {
      const double fac = M[row][col] / M[col][col];
      for (int c = col; c <= n; ++c) M[row][c] -= fac * M[col][c];
    }
  }
  std::vector<double> out(n);
  for (int row = n - 1; row >= 0; --row) {
    double s = M[row][n];
    for (int c = row + 1; c < n; ++c) s -= M[row][c] * out[c];
    out[row] = s / M[row][row];
  }
  return out;
}

namespace detail {

// 8-point Lagrange interpolation of line values at integer offsets from `at`,
// window clamped to the physical half [0, N/2].
inline cd lagrange_half_line(const std::vector<cd>& line, int at, int N, double u) {
  const int half = N / 2;
  int base = static_cast<int>(std::floor(u)) - 3;
  if (base < 0) base = 0;
  if (base > half - 7) base = half - 7;
  cd acc(0, 0);
  for (int s = 0; s < 8; ++s) {
    const int os = base + s;
    double w = 1.0;
    for (int q = 0; q < 8; ++q) {
      if (q == s) continue;
      const int oq = base + q;
      w *= (u - oq) / static_cast<double>(os - oq);
    }
    acc += w * line[static_cast<std::size_t>((at + os) % N)];
  }
  return acc;
}

}  // namespace detail

// Reflection extension across the plane x_axis = x(at): samples with positive
// wrapped offset from the plane (the physical half, offsets 0..N/2) are kept,
// the rest are rebuilt from scaled reflections so the seam is C^k. Fractional
// reflected samples use 8-point interpolation inside the physical half.
inline Field whole_space_extension(const Field& f, int k, int axis, int at = 0) {
  const Lattice& lat = f.lat;
  if (axis < 0 || axis >= lat.dim()) throw std::out_of_range("whole_space_extension: bad axis");
  const int N = lat.sizes[axis];
  if (at < 0 || at >= N) throw std::out_of_range("whole_space_extension: bad plane slot");
  if (N < 16) throw std::invalid_argument("whole_space_extension: axis too short");
  const std::vector<double> c = reflection_coeffs(k);

  Field out = f;
  const std::size_t stride = lat.stride(axis);
  const std::size_t outer = lat.total() / (static_cast<std::size_t>(N) * stride);
  std::vector<cd> line(N);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < stride; ++i) {
      const std::size_t base = o * N * stride + i;
      for (int m = 0; m < N; ++m) line[m] = f.v[base + m * stride];
      for (int m = 0; m < N; ++m) {
        const int w = detail::wrapped_offset(m, at, N);
        if (w >= 0) continue;  // physical half, keep
        cd acc(0, 0);
        for (int r = 1; r <= k + 1; ++r)
          acc += c[r - 1] * detail::lagrange_half_line(line, at, N, -static_cast<double>(w) / r);
        out.v[base + m * stride] = acc;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// probes

struct TraceLossReport {
  std::vector<int> shells;
  std::vector<double> log2_ratio;  // log2 of the per-shell trace ratio
  double slope = 0;
  double ratio_sup = 0;
  double trace_dev = 0;  // production trace vs the per-frequency column sums
};

// Per tangential frequency the extremal profile for the trace inequality is
// u^(eta, tau) = a_eta / W_s(eta, tau) (flat profiles would underfill the
// high-tau tail and fake the exponent). The probe builds that field, traces it
// through the production path, and bins the sharp ratio
//   ||trace||_target / ||u||_source
// by dyadic shells of the loss-carrying frequency scope. With the target
// exponent raised by eps the fitted per-shell slope is ~eps.
inline TraceLossReport trace_loss_probe(const Lattice& lat, int axis, double s1, double s2,
                                        double eps, std::uint64_t seed) {
  if (axis < 0 || axis >= lat.dim()) throw std::out_of_range("trace_loss_probe: bad axis");
  const Lattice b = lat.remove_axis(axis);
  const WeightScope sc = trace_scope(lat, axis);
  const SpaceSpec src_spec{Family::Haniso, s1, s2, 2};
  const bool in_f1 = axis < lat.n1;
  const SpaceSpec tgt_spec{Family::Haniso, in_f1 ? s1 - 0.5 + eps : s1,
                           in_f1 ? s2 : s2 - 0.5 + eps, 2};

  // unit-modulus tangential amplitudes
  std::vector<cd> a(b.total());
  SplitMix64 rng(seed);
  for (auto& z : a) z = rng.unit_phase();

  Spectrum c(lat);
  std::vector<double> den(b.total(), 0.0);  // source norm^2 per tangential slot
  std::vector<cd> pred(b.total(), cd(0, 0));
  {
    std::vector<int> idx(lat.dim()), xi(lat.dim()), bidx(b.dim());
    for (std::size_t r = 0; r < c.c.size(); ++r) {
      lat.unravel(r, idx.data());
      for (int d = 0; d < lat.dim(); ++d) xi[d] = lat.freq_of(d, idx[d]);
      int bd = 0;
      for (int d = 0; d < lat.dim(); ++d)
        if (d != axis) bidx[bd++] = idx[d];
      const std::size_t rb = b.ravel(bidx.data());
      const double Ws = space_weight2(lat, src_spec, xi);
      c.c[r] = a[rb] / Ws;
      den[rb] += 1.0 / Ws;
      pred[rb] += c.c[r];
    }
  }

  const Field u = idft(c);
  const TraceData td = trace(u, 0, axis, 0);
  const Spectrum gh = dft(td.components[0]);

  TraceLossReport rep;
  double predmax = 0;
  for (const auto& z : pred) predmax = std::max(predmax, std::abs(z));
  for (std::size_t rb = 0; rb < gh.c.size(); ++rb)
    rep.trace_dev = std::max(rep.trace_dev, std::abs(gh.c[rb] - pred[rb]) / predmax);

  // dyadic bins of the loss-carrying magnitude on the boundary
  std::vector<int> bidx(b.dim()), eta(b.dim());
  std::map<int, double> num_bin, den_bin;
  for (std::size_t rb = 0; rb < gh.c.size(); ++rb) {
    b.unravel(rb, bidx.data());
    for (int d = 0; d < b.dim(); ++d) eta[d] = b.freq_of(d, bidx[d]);
    const double mag = std::sqrt(scope_abs2(b, sc, eta));
    if (mag < 1.0) continue;
    const int bin = static_cast<int>(std::floor(std::log2(mag))) + 1;
    num_bin[bin] += space_weight2(b, tgt_spec, eta) * std::norm(gh.c[rb]);
    den_bin[bin] += den[rb];
  }
  std::vector<double> xs, ys;
  for (const auto& [bin, num] : num_bin) {
    const double ratio2 = num / den_bin[bin];
    rep.shells.push_back(bin);
    rep.log2_ratio.push_back(0.5 * std::log2(ratio2));
    rep.ratio_sup = std::max(rep.ratio_sup, std::sqrt(ratio2));
    xs.push_back(bin);
    ys.push_back(rep.log2_ratio.back());
  }
  // the top bin touches the truncation edge of the normal-frequency sum; keep
  // the fit on interior shells
  if (xs.size() > 3) {
    xs.pop_back();
    ys.pop_back();
  }
  rep.slope = fit_slope(xs, ys);
  return rep;
}

struct ExtGainReport {
  std::vector<int> shells;
  std::vector<double> log2_ratio;
  double slope = 0;
  double ratio_sup = 0;
};

// Per-frequency boundedness of e_0: the collar profile chi(W(eta)|t|) is
// transformed along the extension axis alone, and
//   sum_tau W_s(eta, tau) |P_eta(tau)|^2  <=  C  W_target(eta)
// is binned by the loss-carrying scope. Bounded slope means the extension
// gains back the half derivative the trace loses.
inline ExtGainReport extension_gain_probe(const Lattice& lat, int axis, double s1, double s2) {
  if (axis < 0 || axis >= lat.dim()) throw std::out_of_range("extension_gain_probe: bad axis");
  const Lattice b = lat.remove_axis(axis);
  const WeightScope sc = trace_scope(lat, axis);
  const SpaceSpec src_spec{Family::Haniso, s1, s2, 2};
  const bool in_f1 = axis < lat.n1;
  const SpaceSpec tgt_spec{Family::Haniso, in_f1 ? s1 - 0.5 : s1, in_f1 ? s2 : s2 - 0.5, 2};
  const int N = lat.sizes[axis];
  const Lattice line_lat(std::vector<int>{N}, in_f1 ? 1 : 0);

  std::vector<int> bidx(b.dim()), eta(b.dim()), xi(lat.dim());
  std::map<int, double> worst;  // per bin, max ratio^2
  for (std::size_t rb = 0; rb < b.total(); ++rb) {
    b.unravel(rb, bidx.data());
    for (int d = 0; d < b.dim(); ++d) eta[d] = b.freq_of(d, bidx[d]);
    const double W = bracket(scope_abs2(b, sc, eta));
    Field prof(line_lat);
    for (int m = 0; m < N; ++m) {
      const double t = 2.0 * kPi * detail::wrapped_offset(m, 0, N) / N;
      prof.v[m] = lp_g(W * std::abs(t));
    }
    const Spectrum ph = dft(prof);
    double num = 0;
    int bd = 0;
    for (int d = 0; d < lat.dim(); ++d)
      if (d != axis) xi[d] = eta[bd++];
    for (int ms = 0; ms < N; ++ms) {
      xi[axis] = line_lat.freq_of(0, ms);
      num += space_weight2(lat, src_spec, xi) * std::norm(ph.c[ms]);
    }
    const double ratio2 = num / space_weight2(b, tgt_spec, eta);
    const double mag = std::sqrt(scope_abs2(b, sc, eta));
    const int bin = mag < 1.0 ? 0 : static_cast<int>(std::floor(std::log2(mag))) + 1;
    auto [it, fresh] = worst.emplace(bin, ratio2);
    if (!fresh) it->second = std::max(it->second, ratio2);
  }
  ExtGainReport rep;
  std::vector<double> xs, ys;
  for (const auto& [bin, r2] : worst) {
    rep.shells.push_back(bin);
    rep.log2_ratio.push_back(0.5 * std::log2(r2));
    rep.ratio_sup = std::max(rep.ratio_sup, std::sqrt(r2));
    if (bin >= 1) {
      xs.push_back(bin);
      ys.push_back(0.5 * std::log2(r2));
    }
  }
  rep.slope = fit_slope(xs, ys);
  return rep;
}

}  // namespace anisolp
