// Acceptance gate: each release criterion maps to a registered experiment run
// at a pinned seed, and prints as exactly one pass/fail line with the measured
// values. The tolerances live next to the measurements in the experiment
// definitions. Exit status is zero only when every criterion passes.

#include <cstdio>
#include <string>
#include <vector>

#include "anisolp/experiments.hpp"

namespace {

struct Criterion {
  int id;
  const char* experiment;
  std::uint64_t seed;
};

}  // namespace

int main() {
  using namespace anisolp;
  const std::vector<Criterion> criteria = {
      {1, "partition-exactness", 1},
      {2, "backend-crossval", 2026},
      {3, "prodlp-equivalence", 1234},
      {4, "lift-isomorphism", 11},
      {5, "psdo-boundedness", 5},
      {6, "psdo-composition", 23},
      {7, "paraproduct-partition", 7},
      {8, "paraproduct-sharpness", 0},
      {9, "trace-exponents", 11},
      {10, "bvp-identities", 16},
      {11, "bvp-estimate", 7100},
      {12, "interp-inequality", 13},
  };

  bool all = true;
  for (const Criterion& c : criteria) {
    bool ok = false;
    std::string detail;
    try {
      const ExperimentResult r = run_experiment({.experiment = c.experiment, .seed = c.seed});
      ok = r.all_pass();
      for (const Verdict& v : r.verdicts) {
        if (!detail.empty()) detail += "  ";
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s=%.4g%s", v.name.c_str(), v.measured,
                      v.pass ? "" : "(!)");
        detail += buf;
      }
    } catch (const std::exception& e) {
      detail = std::string("error: ") + e.what();
    }
    all = all && ok;
    std::printf("%s  criterion %2d  %-22s  seed=%llu  %s\n", ok ? "PASS" : "FAIL", c.id,
                c.experiment, static_cast<unsigned long long>(c.seed), detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s\n", all ? "ACCEPTANCE: PASS" : "ACCEPTANCE: FAIL");
  return all ? 0 : 1;
}
