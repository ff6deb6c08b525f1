#include <catch2/catch_amalgamated.hpp>

#include "anisolp/paraproduct.hpp"

using namespace anisolp;

TEST_CASE("classify is an exclusive trichotomy with cutoff 3", "[paraproduct]") {
  CHECK(classify(5, 6) == Rel::SIM);
  CHECK(classify(2, 5) == Rel::LL);   // d = -3 is already low-high
  CHECK(classify(5, 2) == Rel::GG);
  CHECK(classify(9, 3) == Rel::GG);
  CHECK(classify(4, 4) == Rel::SIM);
  CHECK(classify(0, 2) == Rel::SIM);  // d = -2 still comparable
  CHECK_THROWS_AS(classify(-1, 0), std::invalid_argument);

  for (int i = 0; i <= 12; ++i) {
    for (int ip = 0; ip <= 12; ++ip) {
      const Rel r = classify(i, ip);
      const int d = i - ip;
      const Rel want = d <= -3 ? Rel::LL : (d >= 3 ? Rel::GG : Rel::SIM);
      REQUIRE(r == want);
    }
  }
}

TEST_CASE("case routing covers every index quadruple exactly once", "[paraproduct]") {
  // total and single-valued: every quadruple maps to one of the eight labels
  std::array<long, 8> counts{};
  for (int i = 0; i <= 8; ++i)
    for (int ip = 0; ip <= 8; ++ip)
      for (int j = 0; j <= 8; ++j)
        for (int jp = 0; jp <= 8; ++jp) {
          const CaseLabel c = case_label(i, ip, j, jp);
          counts[static_cast<std::size_t>(c)]++;
        }
  long total = 0;
  for (CaseLabel c : kAllCases) {
    INFO("case " << case_name(c));
    CHECK(counts[static_cast<std::size_t>(c)] > 0);
    total += counts[static_cast<std::size_t>(c)];
  }
  CHECK(total == 9L * 9 * 9 * 9);
}

TEST_CASE("case 1a is exactly the fully sub-scale set", "[paraproduct]") {
  for (int i = 0; i <= 12; ++i)
    for (int ip = 0; ip <= 12; ++ip)
      for (int j = 0; j <= 12; ++j)
        for (int jp = 0; jp <= 12; ++jp) {
          const bool is1a = case_label(i, ip, j, jp) == CaseLabel::C1a;
          const bool sub = (j - jp >= 3) && (i <= j - 3) && (ip <= j - 3);
          REQUIRE(is1a == sub);
        }
}

TEST_CASE("case routing spot checks", "[paraproduct]") {
  CHECK(case_label(0, 0, 5, 0) == CaseLabel::C1a);
  CHECK(case_label(3, 0, 5, 0) == CaseLabel::C1b);  // f factor-1 pokes above j-3
  CHECK(case_label(3, 2, 5, 0) == CaseLabel::C1c);
  CHECK(case_label(3, 2, 6, 0) == CaseLabel::C1a);  // same pair, deeper output scale
  CHECK(case_label(0, 3, 5, 0) == CaseLabel::C1d);
  CHECK(case_label(0, 3, 7, 2) == CaseLabel::C1a);
  CHECK(case_label(5, 0, 4, 3) == CaseLabel::C2a);
  CHECK(case_label(1, 1, 4, 3) == CaseLabel::C2b);
  CHECK(case_label(0, 4, 3, 2) == CaseLabel::C2c);
  CHECK(case_label(4, 4, 0, 3) == CaseLabel::C3);
}

TEST_CASE("case partition reassembles the pointwise product", "[paraproduct]") {
  SplitMix64 rng(2024);
  for (const auto& sz : {std::vector<int>{16, 16}, std::vector<int>{32, 32}}) {
    const Lattice lat(sz, 1);
    for (int t = 0; t < 4; ++t) {
      const Field f = gen_random_smooth(lat, rng.next());
      const Field g = gen_random_smooth(lat, rng.next());
      const Field fg = pointwise_mul(f, g);
      const CasePartition cp = case_partition(f, g);
      Field sum(lat);
      for (CaseLabel c : kAllCases) add_into(sum, cp.at(c));
      CHECK(linf_dist(sum, fg) <= 1e-10 * std::max(1.0, grid_max(fg)));
    }
  }
}

TEST_CASE("case 1a equals its low-pass closed form", "[paraproduct]") {
  const Lattice lat({32, 32}, 1);
  SplitMix64 rng(77);
  for (int t = 0; t < 3; ++t) {
    const Field f = gen_random_smooth(lat, rng.next());
    const Field g = gen_random_smooth(lat, rng.next());
    const CasePartition cp = case_partition(f, g);
    const Field direct = case1a_lowpass_form(f, g);
    const double scale = std::max(1e-30, grid_max(cp.at(CaseLabel::C1a)));
    CHECK(linf_dist(cp.at(CaseLabel::C1a), direct) <= 1e-11 * std::max(1.0, scale));
  }
}

TEST_CASE("product and case norms are controlled by the dominant factor", "[paraproduct]") {
  const Lattice lat({16, 16}, 1);
  const MultBoundReport rep = mult_bound_probe(lat, 1.0, 1.0, 8, 99);
  CHECK(rep.ratio_sup > 0.0);
  CHECK(rep.ratio_sup < 50.0);
  for (CaseLabel c : kAllCases) {
    INFO("case " << case_name(c));
    const double r = rep.case_ratio[static_cast<std::size_t>(c)];
    CHECK(r > 0.0);
    CHECK(r < 50.0);
  }
}

TEST_CASE("bump pair norms follow the predicted scale exponents", "[paraproduct]") {
  // scales below j = 5 are still pre-asymptotic (the model constant of the
  // product norm drifts by > 5%), so the sweep sits at j in {5,6,7}
  const Lattice lat({8192, 1024}, 1);
  const SharpnessReport rep = sharpness_sweep(lat, 2, 2, {5, 6, 7}, 1.0, 1.0, 1.0, 1.0);
  CHECK(rep.pred_slope_f2 == Catch::Approx(5.0));
  CHECK(rep.pred_slope_g2 == Catch::Approx(3.0));
  CHECK(rep.pred_slope_fg2 == Catch::Approx(6.0));
  CHECK(std::abs(rep.slope_f2 - rep.pred_slope_f2) <= 0.05 * rep.pred_slope_f2);
  CHECK(std::abs(rep.slope_g2 - rep.pred_slope_g2) <= 0.05 * rep.pred_slope_g2);
  CHECK(std::abs(rep.slope_fg2 - rep.pred_slope_fg2) <= 0.05 * rep.pred_slope_fg2);
}

TEST_CASE("second-factor regularity threshold separates growth from boundedness",
          "[paraproduct]") {
  const Lattice lat({4096, 512}, 1);
  const std::vector<int> ms = {4, 5, 6};
  // s2* = s1 + s2' + s2'' - (n1+n2)/2 = 2 here; the contrast slope is
  // 2 (s2 - s2*), so +-0.2 around the threshold gives -+0.4.
  const double above = threshold_contrast_slope(lat, ms, 1.0, 1.0, 1.0, 2.2);
  const double below = threshold_contrast_slope(lat, ms, 1.0, 1.0, 1.0, 1.8);
  CHECK(above >= 0.2);
  CHECK(below <= 0.05);
}
