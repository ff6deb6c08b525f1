#include <catch2/catch_amalgamated.hpp>

#include "anisolp/bvp.hpp"
#include "anisolp/generators.hpp"
#include "anisolp/rng.hpp"

using namespace anisolp;

namespace {

// composite Simpson of |eval_terms|^2 on [0, T]
double quad_l2(const std::vector<ModeTerm>& terms, double T, int n) {
  auto f = [&](double t) { return std::norm(eval_terms(terms, t)); };
  double s = f(0) + f(T);
  for (int i = 1; i < n; ++i) s += f(i * T / n) * (i % 2 ? 4.0 : 2.0);
  return s * (T / n) / 3.0;
}

}  // namespace

TEST_CASE("time derivative and operator action match numerical differentiation", "[bvp]") {
  const Lattice b({8}, 0);
  const std::size_t s0 = static_cast<std::size_t>(b.slot_of_freq(0, 3));
  const double mu = mu_rate(b, s0);

  HalfCylinderField u(b);
  u.modes[s0] = {{cd(0.8, -0.3), mu, 0}, {cd(-0.5, 0.2), 1.7 * mu, 1}, {cd(0.1, 0.4), 2.5 * mu, 2}};
  const std::vector<ModeTerm> du = d_dt_terms(u.modes[s0]);
  const HalfCylinderField Au = apply_A(u);

  for (double t : {0.3, 1.1, 2.7}) {
    const double h1 = 1e-6;
    const cd fd1 = (eval_terms(u.modes[s0], t + h1) - eval_terms(u.modes[s0], t - h1)) / (2 * h1);
    CHECK(std::abs(eval_terms(du, t) - fd1) < 1e-6);

    const double h2 = 1e-3;
    const cd fd2 = (eval_terms(u.modes[s0], t + h2) - 2.0 * eval_terms(u.modes[s0], t) +
                    eval_terms(u.modes[s0], t - h2)) /
                   (h2 * h2);
    const cd want = -fd2 + mu * mu * eval_terms(u.modes[s0], t);
    CHECK(std::abs(eval_terms(Au.modes[s0], t) - want) < 5e-4 * (1 + mu * mu));
  }
}

TEST_CASE("operator action on a pure decaying mode vanishes identically", "[bvp]") {
  const Lattice b({16}, 0);
  HalfCylinderField u(b);
  for (std::size_t s = 0; s < u.modes.size(); ++s)
    u.modes[s].push_back({cd(1.3, -0.4), mu_rate(b, s), 0});
  CHECK(max_term_coeff(apply_A(u)) == 0.0);
}

TEST_CASE("boundary data of separated terms follows the termwise rule", "[bvp]") {
  const Lattice b({8}, 0);
  const std::size_t s0 = static_cast<std::size_t>(b.slot_of_freq(0, 2));
  const double mu = mu_rate(b, s0);
  HalfCylinderField u(b);
  u.modes[s0] = {{cd(2, 1), mu, 0}, {cd(1, -1), 1.7 * mu, 1}, {cd(0.5, 0), 2.5 * mu, 2}};

  const CauchyData d = r1_data(u);
  CHECK(std::abs(d.d0[s0] - cd(2, 1)) < 1e-14);
  CHECK(std::abs(d.d1[s0] - (-cd(2, 1) * mu + cd(1, -1))) < 1e-14);
  // independent check: evaluate the profile and its derivative at t = 0
  CHECK(std::abs(d.d0[s0] - eval_terms(u.modes[s0], 0.0)) < 1e-14);
  CHECK(std::abs(d.d1[s0] - eval_terms(d_dt_terms(u.modes[s0]), 0.0)) < 1e-14);
}

TEST_CASE("projector onto decaying Cauchy data is idempotent with the right kernel", "[bvp]") {
  const Lattice b({16}, 0);
  SplitMix64 rng(314);
  std::vector<cd> d0(b.total()), d1(b.total());
  for (std::size_t s = 0; s < b.total(); ++s) {
    d0[s] = rng.unit_phase() * rng.uniform(0.5, 2.0);
    d1[s] = rng.unit_phase() * rng.uniform(0.5, 2.0);
  }
  std::vector<cd> p0 = d0, p1 = d1;
  calderon_project(b, p0, p1);
  std::vector<cd> q0 = p0, q1 = p1;
  calderon_project(b, q0, q1);
  for (std::size_t s = 0; s < b.total(); ++s) {
    const double mu = mu_rate(b, s);
    CHECK(std::abs(q0[s] - p0[s]) < 1e-14 * (1 + mu));
    CHECK(std::abs(q1[s] - p1[s]) < 1e-14 * (1 + mu) * mu);
  }
  // growing data (1, mu) is annihilated, decaying data (1, -mu) is fixed
  for (std::size_t s = 0; s < b.total(); ++s) {
    const double mu = mu_rate(b, s);
    std::vector<cd> g0(b.total(), cd(0, 0)), g1(b.total(), cd(0, 0));
    g0[s] = 1;
    g1[s] = mu;
    calderon_project(b, g0, g1);
    CHECK(std::abs(g0[s]) == 0.0);
    CHECK(std::abs(g1[s]) == 0.0);
    g0[s] = 1;
    g1[s] = -mu;
    calderon_project(b, g0, g1);
    CHECK(std::abs(g0[s] - 1.0) < 1e-15);
    CHECK(std::abs(g1[s] + mu) < 1e-15 * mu);
  }
}

TEST_CASE("layer potential solves the homogeneous equation with projected data", "[bvp]") {
  const Lattice b({16}, 0);
  const Field g0 = gen_random_smooth(b, 51);
  const Field g1 = gen_random_smooth(b, 52);
  const HalfCylinderField w = poisson_solve(g0, g1);

  CHECK(max_term_coeff(apply_A(w)) == 0.0);

  const Spectrum t0 = synthesis_coeffs(g0);
  const Spectrum t1 = synthesis_coeffs(g1);
  std::vector<cd> p0 = t0.c, p1 = t1.c;
  calderon_project(b, p0, p1);
  const CauchyData d = r1_data(w);
  for (std::size_t s = 0; s < b.total(); ++s) {
    const double mu = mu_rate(b, s);
    CHECK(std::abs(d.d0[s] - p0[s]) < 1e-13);
    CHECK(std::abs(d.d1[s] - p1[s]) < 1e-13 * mu);
    REQUIRE(w.modes[s].size() == 1);
    CHECK(std::abs(w.modes[s][0].c - (mu * t0.c[s] - t1.c[s]) / (2.0 * mu)) < 1e-14);
    CHECK(w.modes[s][0].mu == mu);
    CHECK(w.modes[s][0].tpow == 0);
  }
}

TEST_CASE("periodic inverse is a two-notch isomorphism", "[bvp]") {
  const Lattice lat({16, 16}, 1);
  const Field f = gen_random_smooth(lat, 61);
  const Field v = invertible_double_solve(f);
  const Field Av = apply_multiplier(v, [&](const std::vector<int>& xi) {
    return 1.0 + abs2_of(xi, 0, lat.dim());
  });
  CHECK(l2_dist(Av, f) < 1e-12 * (1 + lp_norm(f, 2)));

  for (double s : {-1.0, 0.0, 1.0}) {
    const double n_up = norm(v, SpaceSpec{Family::H, s + 2, 0, 2}, Backend::Multiplier).value;
    const double n_src = norm(f, SpaceSpec{Family::H, s, 0, 2}, Backend::Multiplier).value;
    CHECK(n_up / n_src == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("half-cylinder norm closed form on a single decaying mode", "[bvp]") {
  const Lattice b({16}, 0);
  for (int k : {0, 3, 5}) {
    const std::size_t s0 = static_cast<std::size_t>(b.slot_of_freq(0, k));
    const double mu = mu_rate(b, s0);
    for (int S : {0, 1, 2, 3}) {
      for (double s2 : {0.0, 0.5, 1.0}) {
        HalfCylinderField u(b);
        u.modes[s0].push_back({cd(0.8, -0.6), mu, 0});  // unit modulus
        const double got2 = hc_norm(u, S, s2) * hc_norm(u, S, s2);
        const double want2 = std::pow(2.0, S) * std::pow(mu, 2.0 * S + 2.0 * s2) / (2.0 * mu);
        CHECK(got2 / want2 == Catch::Approx(1.0).margin(1e-12));
      }
    }
  }
  HalfCylinderField u(b);
  CHECK_THROWS_AS(hc_norm(u, -1, 0.0), std::invalid_argument);
}

TEST_CASE("half-cylinder norm matches dense quadrature", "[bvp]") {
  const Lattice b({8}, 0);
  SplitMix64 rng(77);
  HalfCylinderField u(b);
  for (std::size_t s = 0; s < u.modes.size(); ++s) {
    const double mu = mu_rate(b, s);
    u.modes[s].push_back({rng.unit_phase() * rng.uniform(0.3, 1.0), mu, 0});
    u.modes[s].push_back({rng.unit_phase() * rng.uniform(0.3, 1.0), 1.7 * mu, 2});
  }
  const int s1 = 2;
  const double s2 = 0.7;
  double want2 = 0;
  for (std::size_t s = 0; s < u.modes.size(); ++s) {
    const double mu = mu_rate(b, s);
    std::vector<ModeTerm> der = u.modes[s];
    double sum = 0;
    for (int j = 0; j <= s1; ++j) {
      if (j > 0) der = d_dt_terms(der);
      double bi = 1;
      for (int i = 1; i <= j; ++i) bi = bi * (s1 - j + i) / i;
      sum += bi * std::pow(mu, 2.0 * (s1 - j)) * quad_l2(der, 25.0, 20000);
    }
    want2 += std::pow(mu, 2.0 * s2) * sum;
  }
  const double got = hc_norm(u, s1, s2);
  CHECK(got * got / want2 == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("boundary trace index bookkeeping", "[bvp]") {
  CHECK(boundary_gamma(BCondSpec{BCKind::Dirichlet}, 1, 0.5) == 3.0);
  CHECK(boundary_gamma(BCondSpec{BCKind::Neumann}, 0, 0.0) == 0.5);
  CHECK(boundary_gamma(BCondSpec{BCKind::Robin, 2.0}, 0, 0.0) == 0.5);

  const Lattice b({16}, 0);
  const std::size_t s0 = static_cast<std::size_t>(b.slot_of_freq(0, 3));
  std::vector<cd> d(b.total(), cd(0, 0));
  d[s0] = cd(0.6, 0.8);  // unit modulus
  const double mu = mu_rate(b, s0);
  CHECK(boundary_coeff_norm(b, d, 1.25) == Catch::Approx(std::pow(mu, 1.25)).epsilon(1e-12));
}

TEST_CASE("ellipticity indicator separates the boundary operators", "[bvp]") {
  const Lattice b({16}, 0);

  const FredholmReport rd = fredholm_indicator(b, BCondSpec{BCKind::Dirichlet});
  CHECK(rd.min_modulus == 1.0);
  CHECK(rd.zero_modes == 0);

  const FredholmReport rn = fredholm_indicator(b, BCondSpec{BCKind::Neumann});
  CHECK(rn.min_modulus == Catch::Approx(1.0).margin(1e-12));
  CHECK(rn.zero_modes == 0);

  // Robin coefficient tuned to the decay rate of |k| = 3: exactly two zero modes
  const FredholmReport rr = fredholm_indicator(b, BCondSpec{BCKind::Robin, bracket(9.0)});
  CHECK(rr.zero_modes == 2);
  CHECK(rr.min_modulus == 0.0);

  const FredholmReport rs = fredholm_indicator(b, BCondSpec{BCKind::Robin, 0.5});
  CHECK(rs.zero_modes == 0);
  CHECK(rs.min_modulus > 0.2);

  const FredholmReport rp = fredholm_indicator(b, BCondSpec{BCKind::Pathological});
  CHECK(rp.zero_modes == b.total());
  CHECK(rp.min_modulus == 0.0);
}

TEST_CASE("half-space solve satisfies interior, layer, and boundary residuals", "[bvp]") {
  const Lattice lat({64, 16}, 1);
  const Lattice b = lat.remove_axis(0);
  const Field f = gen_random_smooth(lat, 31);
  const Field g = gen_random_smooth(b, 32);
  const Spectrum gt = synthesis_coeffs(g);

  for (BCKind kind : {BCKind::Dirichlet, BCKind::Neumann}) {
    const BCondSpec B{kind};
    const BVPResult res = solve_bvp(f, B, g);
    CHECK(res.fredholm_ok);
    CHECK(res.incompatible_modes == 0);
    CHECK(res.min_modulus == Catch::Approx(1.0).margin(1e-12));

    // collar cutoff keeps |t| <= pi/4 verbatim and kills |t| >= pi/2
    const std::size_t stride = lat.stride(0);
    for (int m : {0, 3, 61}) {  // wrapped offsets 0, 3, -3: inside the collar
      for (std::size_t i = 0; i < stride; ++i)
        CHECK(res.cutoff_f.v[m * stride + i] == f.v[m * stride + i]);
    }
    for (int m : {16, 32, 48}) {  // |t| >= pi/2
      for (std::size_t i = 0; i < stride; ++i) CHECK(res.cutoff_f.v[m * stride + i] == cd(0, 0));
    }

    const Field Av = apply_multiplier(res.v, [&](const std::vector<int>& xi) {
      return 1.0 + abs2_of(xi, 0, lat.dim());
    });
    CHECK(l2_dist(Av, res.cutoff_f) < 1e-12 * (1 + lp_norm(res.cutoff_f, 2)));

    CHECK(max_term_coeff(apply_A(res.w)) == 0.0);

    for (std::size_t s = 0; s < b.total(); ++s) {
      double a, bb;
      B.row(b, s, a, bb);
      CHECK(std::abs(a * res.total_data.d0[s] + bb * res.total_data.d1[s] - gt.c[s]) < 1e-12);
    }
  }

  CHECK_THROWS_AS(solve_bvp(gen_random_smooth(b, 1), BCondSpec{}, g), std::invalid_argument);
  CHECK_THROWS_AS(solve_bvp(f, BCondSpec{}, gen_random_smooth(Lattice({8}, 0), 1)),
                  std::invalid_argument);
}

TEST_CASE("incompatible boundary rows are flagged instead of divided through", "[bvp]") {
  const Lattice lat({64, 16}, 1);
  const Lattice b = lat.remove_axis(0);
  const Field f = gen_random_smooth(lat, 31);
  const Field g = gen_random_smooth(b, 32);
  const Spectrum gt = synthesis_coeffs(g);

  const BVPResult bad = solve_bvp(f, BCondSpec{BCKind::Pathological}, g);
  CHECK_FALSE(bad.fredholm_ok);
  CHECK(bad.incompatible_modes == b.total());
  CHECK(bad.min_modulus == 0.0);
  CHECK(bad.incompatible_mass > 0.1);
  CHECK(max_term_coeff(bad.w) == 0.0);  // nothing divided through

  // Robin row tuned to |k| = 2: exactly those two modes are skipped, the rest solve
  const BCondSpec rob{BCKind::Robin, bracket(4.0)};
  const BVPResult rb = solve_bvp(f, rob, g);
  CHECK_FALSE(rb.fredholm_ok);
  CHECK(rb.incompatible_modes == 2);
  const std::size_t z1 = static_cast<std::size_t>(b.slot_of_freq(0, 2));
  const std::size_t z2 = static_cast<std::size_t>(b.slot_of_freq(0, -2));
  for (std::size_t s = 0; s < b.total(); ++s) {
    if (s == z1 || s == z2) continue;
    double a, bb;
    rob.row(b, s, a, bb);
    CHECK(std::abs(a * rb.total_data.d0[s] + bb * rb.total_data.d1[s] - gt.c[s]) < 1e-12);
  }
}

TEST_CASE("single-mode solve saturates the closed-form energy ratio", "[bvp]") {
  const Lattice lat({64, 16}, 1);
  const Lattice b = lat.remove_axis(0);
  const Field f0(lat);  // zero interior load
  const Field g = gen_mode(b, {3});
  const Spectrum gt = synthesis_coeffs(g);

  const BCondSpec B{BCKind::Dirichlet};
  const BVPResult res = solve_bvp(f0, B, g);
  for (const auto sp : {std::pair<int, double>{0, 0.0}, std::pair<int, double>{1, 0.5}}) {
    const auto [s1, s2] = sp;
    const double hc = hc_norm(res.w, s1 + 2, s2);
    const double bn = boundary_coeff_norm(b, gt.c, boundary_gamma(B, s1, s2));
    CHECK((hc * hc) / (bn * bn) == Catch::Approx(std::pow(2.0, s1 + 1)).margin(1e-12));
  }
}

TEST_CASE("a-priori constant is stable across boundary sizes", "[bvp]") {
  for (int s1 : {0, 1}) {
    for (double s2 : {0.0, 1.0}) {
      double cmin = std::numeric_limits<double>::infinity(), cmax = 0;
      for (int n : {16, 32, 64}) {
        const Lattice b({n}, 0);
        const double C =
            elliptic_constant(b, BCondSpec{BCKind::Dirichlet}, s1, s2, 12, 7100 + n);
        CHECK(C > 0.8);
        CHECK(C < 3.0);
        cmin = std::min(cmin, C);
        cmax = std::max(cmax, C);
      }
      CHECK(cmax / cmin < 2.0);
    }
  }
  const double CN = elliptic_constant(Lattice({32}, 0), BCondSpec{BCKind::Neumann}, 0, 0.5, 12, 911);
  CHECK(CN > 0.8);
  CHECK(CN < 3.0);
}

TEST_CASE("per-shell ratios detect an over-greedy boundary weight", "[bvp]") {
  const Lattice b({128}, 0);
  for (BCKind kind : {BCKind::Dirichlet, BCKind::Neumann}) {
    const std::uint64_t seed = kind == BCKind::Dirichlet ? 400 : 401;
    const double flat = elliptic_shell_slope(b, BCondSpec{kind}, 0, 0.5, 0.0, seed);
    const double greedy = elliptic_shell_slope(b, BCondSpec{kind}, 0, 0.5, 0.2, seed);
    CHECK(std::abs(flat) < 0.05);
    CHECK(greedy > 0.1);
  }
  CHECK(elliptic_shell_slope(b, BCondSpec{BCKind::Dirichlet}, 1, 0.5, 0.2, 402) > 0.1);
}
