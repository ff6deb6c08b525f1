#include <catch2/catch_amalgamated.hpp>

#include "anisolp/experiments.hpp"

using namespace anisolp;

TEST_CASE("experiment registry exposes the full verification surface", "[cli]") {
  const std::vector<std::string> expected = {
      "backend-crossval",   "bvp-estimate",          "bvp-fredholm",
      "bvp-identities",     "interp-inequality",     "lift-isomorphism",
      "paraproduct-partition", "paraproduct-sharpness", "partition-exactness",
      "prodlp-equivalence", "psdo-boundedness",      "psdo-composition",
      "trace-exponents",    "trace-sharpness"};
  CHECK(experiment_names() == expected);  // registry iteration is name-sorted

  ExperimentConfig cfg;
  cfg.experiment = "definitely-not-registered";
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("boundary condition parser covers the supported rows", "[cli]") {
  CHECK(parse_bc("dirichlet").kind == BCKind::Dirichlet);
  CHECK(parse_bc("neumann").kind == BCKind::Neumann);
  CHECK(parse_bc("pathological").kind == BCKind::Pathological);

  const BCondSpec robin = parse_bc("robin:2.5");
  CHECK(robin.kind == BCKind::Robin);
  CHECK(robin.gamma == 2.5);
  CHECK(parse_bc("robin:-1.5").gamma == -1.5);

  CHECK_THROWS_AS(parse_bc("robin:"), std::invalid_argument);
  CHECK_THROWS_AS(parse_bc("robin:abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_bc("robin:2.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_bc("cauchy"), std::invalid_argument);
}

TEST_CASE("experiments resolve defaults and honor size overrides", "[cli]") {
  ExperimentConfig cfg;
  cfg.experiment = "partition-exactness";
  cfg.seed = 1;
  cfg.sizes = {8};
  const ExperimentResult r = run_experiment(cfg);
  CHECK(r.all_pass());
  CHECK(r.csv_header == "size,scope,defect");
  CHECK(r.csv_rows.size() == 3);  // one size, three scopes
  bool saw_sizes = false;
  for (const auto& [k, v] : r.params) {
    if (k == "sizes") {
      saw_sizes = true;
      CHECK(v == "8");
    }
  }
  CHECK(saw_sizes);

  cfg.sizes = {32, 16};
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);

  cfg.sizes.clear();
  const ExperimentResult rd = run_experiment(cfg);
  CHECK(rd.csv_rows.size() == 9);  // default sizes 16, 32, 64
}

TEST_CASE("experiment runs are deterministic in the seed", "[cli]") {
  // the partition defect sees the random phases (pointwise products), so it
  // is sensitive to the seed; rerunning the same config must reproduce it
  ExperimentConfig cfg;
  cfg.experiment = "paraproduct-partition";
  cfg.seed = 424242;
  cfg.sizes = {8};
  cfg.trials = 2;
  const ExperimentResult a = run_experiment(cfg);
  const ExperimentResult b = run_experiment(cfg);
  REQUIRE(a.csv_rows.size() == b.csv_rows.size());
  CHECK(a.csv_rows == b.csv_rows);
  REQUIRE(a.verdicts.size() == b.verdicts.size());
  for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
    CHECK(a.verdicts[i].name == b.verdicts[i].name);
    CHECK(a.verdicts[i].pass == b.verdicts[i].pass);
    CHECK(a.verdicts[i].measured == b.verdicts[i].measured);
  }

  cfg.seed = 424243;  // a different seed must actually change the data
  const ExperimentResult c = run_experiment(cfg);
  CHECK(a.csv_rows != c.csv_rows);
}

TEST_CASE("fredholm verdicts track the boundary row", "[cli]") {
  ExperimentConfig cfg;
  cfg.experiment = "bvp-fredholm";
  cfg.seed = 1;
  cfg.sizes = {16};

  ExperimentResult r = run_experiment(cfg);  // default row is the degenerate one
  CHECK(r.all_pass());
  REQUIRE(r.verdicts.size() == 1);
  CHECK(r.verdicts.front().name == "degenerate-all-modes");
  CHECK(r.csv_rows.size() == 16);

  cfg.bc = "dirichlet";
  r = run_experiment(cfg);
  CHECK(r.all_pass());
  CHECK(r.verdicts.front().name == "uniformly-invertible");

  cfg.bc = "robin:0.5";
  r = run_experiment(cfg);
  CHECK(r.all_pass());
  CHECK(r.verdicts.front().name == "finite-kernel");
}
