// Command line driver: field generation and IO, norm evaluation, dyadic
// decompositions, operator/trace/boundary probes, and the named experiment
// runner. Every summary goes to stdout as JSON; tabular data is CSV. Exit
// codes: 0 success, 1 structural error (bad arguments, IO, unknown names),
// 2 a verdict failed or the solve flagged incompatible modes.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "anisolp/experiments.hpp"
#include "anisolp/fld_io.hpp"

using nlohmann::ordered_json;
using namespace anisolp;

namespace {

// The computation is single-threaded; the knob is echoed so runs stay
// comparable if that ever changes.
int threads_setting() {
  const char* s = std::getenv("ANISO_LP_THREADS");
  if (!s) return 1;
  const int v = std::atoi(s);
  return v > 0 ? v : 1;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad integer list '" + s + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

SpaceSpec parse_space_spec(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string piece;
  while (std::getline(ss, piece, ':')) parts.push_back(piece);
  if (parts.size() != 4)
    throw std::invalid_argument("space spec must be family:s1:s2:p, got '" + s + "'");
  SpaceSpec sp;
  sp.family = family_from_name(parts[0]);
  try {
    sp.s1 = std::stod(parts[1]);
    sp.s2 = std::stod(parts[2]);
    sp.p = std::stod(parts[3]);
  } catch (const std::exception&) {
    throw std::invalid_argument("space spec has non-numeric exponents: '" + s + "'");
  }
  return sp;
}

Backend parse_backend(const std::string& s) {
  if (s == "lp") return Backend::LP;
  if (s == "mult" || s == "multiplier") return Backend::Multiplier;
  throw std::invalid_argument("backend must be lp or mult, got '" + s + "'");
}

WeightScope parse_scope(const std::string& s) {
  if (s == "full") return WeightScope::Full;
  if (s == "factor1") return WeightScope::Factor1;
  if (s == "factor2") return WeightScope::Factor2;
  throw std::invalid_argument("scope must be full, factor1 or factor2, got '" + s + "'");
}

ordered_json base_summary(const std::string& command) {
  ordered_json j;
  j["version"] = kToolkitVersion;
  j["command"] = command;
  j["threads"] = threads_setting();
  return j;
}

ordered_json verdicts_json(const ExperimentResult& r) {
  ordered_json vs = ordered_json::array();
  for (const Verdict& v : r.verdicts)
    vs.push_back(
        {{"name", v.name}, {"pass", v.pass}, {"measured", v.measured}, {"gate", v.gate}});
  return vs;
}

ordered_json result_json(const ExperimentResult& r, const std::string& command) {
  ordered_json j = base_summary(command);
  j["experiment"] = r.experiment;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = params;
  j["verdicts"] = verdicts_json(r);
  j["all_pass"] = r.all_pass();
  j["csv_rows"] = r.csv_rows.size();
  return j;
}

std::string csv_text(const ExperimentResult& r) {
  std::string t = r.csv_header + "\n";
  for (const std::string& row : r.csv_rows) t += row + "\n";
  return t;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path);
}

// shared tail of `run` and the probe aliases: persist when asked, then print
int finish_experiment(const ExperimentResult& r, const std::string& outdir,
                      const std::string& command, bool csv_to_stdout) {
  if (!outdir.empty()) {
    std::filesystem::create_directories(outdir);
    write_text(outdir + "/" + r.experiment + ".csv", csv_text(r));
    write_text(outdir + "/" + r.experiment + ".json", result_json(r, command).dump(2) + "\n");
  }
  if (csv_to_stdout) std::cout << csv_text(r);
  std::cout << result_json(r, command).dump(2) << std::endl;
  return r.all_pass() ? 0 : 2;
}

// -----------------------------------------------------------------------
// subcommands

int cmd_gen_field(const std::string& kind, const std::vector<int>& sizes,
                  const std::vector<int>& split, std::uint64_t seed, const std::string& out) {
  if (split.size() != 2 || split[0] < 0 || split[1] < 0 ||
      split[0] + split[1] != static_cast<int>(sizes.size()))
    throw std::invalid_argument("--split must be n1,n2 with n1+n2 equal to the size count");
  const Lattice lat(sizes, split[0]);
  Field f;
  if (kind == "random-smooth") {
    f = gen_random_smooth(lat, seed);
  } else if (kind.rfind("mode:", 0) == 0) {
    const std::vector<int> k = parse_int_list(kind.substr(5));
    if (static_cast<int>(k.size()) != lat.dim())
      throw std::invalid_argument("mode kind needs one frequency per axis");
    f = gen_mode(lat, k);
  } else if (kind.rfind("bump:", 0) == 0) {
    const std::vector<int> ij = parse_int_list(kind.substr(5));
    if (ij.size() != 2) throw std::invalid_argument("bump kind needs two dyadic indices i,j");
    f = gen_bump(lat, ij[0], ij[1]);
  } else {
    throw std::invalid_argument("unknown kind '" + kind +
                                "' (random-smooth | mode:k1,...,kd | bump:i,j)");
  }
  write_fld(out, f);
  ordered_json j = base_summary("gen-field");
  j["kind"] = kind;
  j["sizes"] = sizes;
  j["split"] = split;
  j["seed"] = seed;
  j["samples"] = f.lat.total();
  j["out"] = out;
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_norm(const std::string& spec, const std::string& backend, const std::string& in) {
  const Field f = read_fld(in);
  const SpaceSpec sp = parse_space_spec(spec);
  const Backend be = parse_backend(backend);
  const NormReport rep = norm(f, sp, be);
  ordered_json j = base_summary("norm");
  j["in"] = in;
  j["spec"] = spec;
  j["family"] = family_name(sp.family);
  j["s1"] = sp.s1;
  j["s2"] = sp.s2;
  j["p"] = sp.p;
  j["backend"] = be == Backend::LP ? "lp" : "mult";
  j["value"] = rep.value;
  j["blocks_used"] = rep.blocks_used;
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_decompose(const std::string& in, const std::string& mode, const std::string& scope) {
  const Field f = read_fld(in);
  auto energy = [](const Field& g) {
    const double n = lp_norm(g, 2);
    return n * n;
  };
  if (mode == "radial") {
    const WeightScope sc = parse_scope(scope);
    std::cout << "j,energy,support_leakage\n";
    for (const DyadicBlock& b : radial_blocks(f, sc))
      std::cout << b.j << "," << detail::fmt_g(energy(b.field)) << ","
                << detail::fmt_g(support_leakage(b, sc)) << "\n";
    return 0;
  }
  if (mode == "product") {
    const ProductBlocks pb = product_blocks(f);
    std::cout << "i,j,energy,support_leakage\n";
    for (const DyadicBlock& b : pb.blocks)
      std::cout << b.i << "," << b.j << "," << detail::fmt_g(energy(b.field)) << ","
                << detail::fmt_g(support_leakage(b)) << "\n";
    return 0;
  }
  throw std::invalid_argument("mode must be radial or product, got '" + mode + "'");
}

int cmd_probe_psdo(const std::string& symbol, const std::string& spec, std::vector<int> sizes,
                   std::uint64_t seed, int trials) {
  if (sizes.empty()) sizes = {16, 32, 64};
  const SpaceSpec sp = parse_space_spec(spec);
  const Symbol a = parse_symbol(symbol, 1);
  SplitMix64 master(seed);
  std::cout << "size,bound\n";
  double bmin = std::numeric_limits<double>::infinity(), bmax = 0;
  for (int N : sizes) {
    const Lattice lat({N, N}, 1);
    const OpBoundReport rep = boundedness_probe(a, sp, sp, lat, trials, master.next());
    std::cout << N << "," << detail::fmt_g(rep.best) << "\n";
    bmin = std::min(bmin, rep.best);
    bmax = std::max(bmax, rep.best);
  }
  ordered_json j = base_summary("probe-psdo");
  j["symbol"] = symbol;
  j["spec"] = spec;
  j["sizes"] = sizes;
  j["seed"] = seed;
  j["trials"] = trials;
  j["bound_min"] = bmin;
  j["bound_max"] = bmax;
  j["drift"] = bmax / bmin;
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_probe_paraproduct(const std::string& experiment, const std::vector<int>& sizes,
                          std::uint64_t seed, double s1, double s2, int trials) {
  if (experiment == "partition" || experiment == "sharpness") {
    ExperimentConfig cfg;
    cfg.experiment = "paraproduct-" + experiment;
    cfg.sizes = sizes;
    cfg.seed = seed;
    if (trials > 0) cfg.trials = trials;
    return finish_experiment(run_experiment(cfg), "", "probe-paraproduct", true);
  }
  if (experiment == "bound") {
    const int N = sizes.empty() ? 32 : sizes.front();
    const Lattice lat({N, N}, 1);
    const MultBoundReport rep = mult_bound_probe(lat, s1, s2, trials > 0 ? trials : 6, seed);
    std::cout << "case,ratio\n";
    for (CaseLabel c : kAllCases)
      std::cout << case_name(c) << ","
                << detail::fmt_g(rep.case_ratio[static_cast<std::size_t>(c)]) << "\n";
    ordered_json j = base_summary("probe-paraproduct");
    j["experiment"] = "bound";
    j["size"] = N;
    j["seed"] = seed;
    j["s1"] = s1;
    j["s2"] = s2;
    j["trials"] = rep.trials;
    j["ratio_sup"] = rep.ratio_sup;
    std::cout << j.dump(2) << std::endl;
    return 0;
  }
  throw std::invalid_argument("probe paraproduct experiment must be partition, bound or sharpness");
}

int cmd_probe_trace(const std::string& which, double s1, double s2, double p,
                    const std::vector<double>& eps_list, std::uint64_t seed) {
  if (p != 2)
    throw std::invalid_argument("trace probe supports p = 2 only");
  const detail::TraceCaseCfg* tc = nullptr;
  const auto table = detail::trace_case_table();
  for (const auto& c : table)
    if (which == c.name) tc = &c;
  if (!tc) throw std::invalid_argument("case must be tangential or mixed, got '" + which + "'");
  const Lattice lat(tc->sizes, 1);
  const double us1 = s1 < 0 ? tc->s1 : s1;
  const double us2 = s2 < 0 ? tc->s2 : s2;
  std::cout << "eps,shell,log2_ratio\n";
  ordered_json verdicts = ordered_json::array();
  bool all = true;
  for (double eps : eps_list) {
    const TraceLossReport rep = trace_loss_probe(lat, tc->axis, us1, us2, eps, seed);
    for (std::size_t i = 0; i < rep.shells.size(); ++i)
      std::cout << detail::fmt_g(eps) << "," << rep.shells[i] << ","
                << detail::fmt_g(rep.log2_ratio[i]) << "\n";
    const bool bounded_regime = eps < 0.1;
    const bool pass = bounded_regime ? std::abs(rep.slope) <= 0.05 : rep.slope >= 0.15;
    all = all && pass;
    verdicts.push_back({{"eps", eps},
                        {"slope", rep.slope},
                        {"gate", bounded_regime ? "|slope| <= 0.05" : "slope >= 0.15"},
                        {"pass", pass}});
  }
  ordered_json j = base_summary("probe-trace");
  j["case"] = which;
  j["sizes"] = tc->sizes;
  j["axis"] = tc->axis;
  j["s1"] = us1;
  j["s2"] = us2;
  j["p"] = p;
  j["seed"] = seed;
  j["verdicts"] = verdicts;
  j["all_pass"] = all;
  std::cout << j.dump(2) << std::endl;
  return all ? 0 : 2;
}

int cmd_bvp_solve(const std::string& bc, int s1, double s2, const std::string& in,
                  const std::string& gpath, const std::string& out) {
  const BCondSpec B = parse_bc(bc);
  const Field f = read_fld(in);
  const Field g = read_fld(gpath);
  const BVPResult res = solve_bvp(f, B, g);
  const Lattice& lat = f.lat;
  const Lattice b = lat.remove_axis(0);
  const Spectrum gt = synthesis_coeffs(g);

  const Field Av = apply_multiplier(res.v, [&](const std::vector<int>& xi) {
    return 1.0 + abs2_of(xi, 0, lat.dim());
  });
  const double interior = l2_dist(Av, res.cutoff_f) / (1 + lp_norm(res.cutoff_f, 2));
  const double layer = max_term_coeff(apply_A(res.w));
  double boundary = 0;
  for (std::size_t s = 0; s < b.total(); ++s) {
    double ca, cb;
    B.row(b, s, ca, cb);
    boundary = std::max(
        boundary, std::abs(ca * res.total_data.d0[s] + cb * res.total_data.d1[s] - gt.c[s]));
  }

  ordered_json j = base_summary("bvp-solve");
  j["bc"] = detail::bc_label(B);
  j["s1"] = s1;
  j["s2"] = s2;
  j["in"] = in;
  j["g"] = gpath;
  j["sizes"] = lat.sizes;
  j["fredholm_ok"] = res.fredholm_ok;
  j["min_modulus"] = res.min_modulus;
  j["incompatible_modes"] = res.incompatible_modes;
  j["incompatible_mass"] = res.incompatible_mass;
  j["residuals"] = {{"interior", interior}, {"layer", layer}, {"boundary_max", boundary}};
  j["solution_norm"] = hc_norm(res.w, s1 + 2, s2);
  j["data_norm"] = boundary_coeff_norm(b, gt.c, boundary_gamma(B, s1, s2));

  if (!out.empty()) {
    ordered_json full = j;
    full["blat_sizes"] = b.sizes;
    ordered_json modes = ordered_json::array();
    for (std::size_t s = 0; s < res.w.modes.size(); ++s) {
      ordered_json terms = ordered_json::array();
      for (const ModeTerm& t : res.w.modes[s])
        terms.push_back(
            {{"re", t.c.real()}, {"im", t.c.imag()}, {"mu", t.mu}, {"tpow", t.tpow}});
      modes.push_back({{"slot", s}, {"terms", terms}});
    }
    full["modes"] = modes;
    write_text(out, full.dump(2) + "\n");
    j["out"] = out;
  }
  std::cout << j.dump(2) << std::endl;
  return res.fredholm_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anisotropic dyadic-analysis toolkit"};
  app.require_subcommand(1);
  int rc = 0;

  // gen-field
  auto* gen = app.add_subcommand("gen-field", "generate a field and write it as .fld");
  std::string g_kind = "random-smooth", g_out;
  std::vector<int> g_sizes, g_split = {1, 1};
  std::uint64_t g_seed = 0;
  gen->add_option("--kind", g_kind, "random-smooth | mode:k1,...,kd | bump:i,j");
  gen->add_option("--sizes", g_sizes, "lattice sizes per axis")->required()->delimiter(',');
  gen->add_option("--split", g_split, "factor split n1,n2")->delimiter(',');
  gen->add_option("--seed", g_seed, "rng seed")->required();
  gen->add_option("--out", g_out, "output .fld path")->required();
  gen->callback([&] { rc = cmd_gen_field(g_kind, g_sizes, g_split, g_seed, g_out); });

  // norm
  auto* nrm = app.add_subcommand("norm", "evaluate a space norm of a stored field");
  std::string n_spec, n_backend = "mult", n_in;
  nrm->add_option("--spec", n_spec, "family:s1:s2:p, e.g. Haniso:1:1:2")->required();
  nrm->add_option("--backend", n_backend, "lp | mult");
  nrm->add_option("--in", n_in, "input .fld path")->required();
  nrm->callback([&] { rc = cmd_norm(n_spec, n_backend, n_in); });

  // decompose
  auto* dec = app.add_subcommand("decompose", "dyadic block energies of a stored field (CSV)");
  std::string d_in, d_mode = "radial", d_scope = "full";
  dec->add_option("--in", d_in, "input .fld path")->required();
  dec->add_option("--mode", d_mode, "radial | product");
  dec->add_option("--scope", d_scope, "full | factor1 | factor2 (radial mode)");
  dec->callback([&] { rc = cmd_decompose(d_in, d_mode, d_scope); });

  // probe
  auto* probe = app.add_subcommand("probe", "operator, paraproduct and trace probes");
  probe->require_subcommand(1);

  auto* pp = probe->add_subcommand("psdo", "operator bound across sizes");
  std::string pp_symbol = "one", pp_spec = "Haniso:0:0:2";
  std::vector<int> pp_sizes;
  std::uint64_t pp_seed = 0;
  int pp_trials = 6;
  pp->add_option("--symbol", pp_symbol, "symbol spec, e.g. mixed:1,0");
  pp->add_option("--spec", pp_spec, "space spec family:s1:s2:p");
  pp->add_option("--sizes", pp_sizes, "square lattice sizes")->delimiter(',');
  pp->add_option("--seed", pp_seed, "rng seed")->required();
  pp->add_option("--trials", pp_trials, "random fields per size");
  pp->callback([&] { rc = cmd_probe_psdo(pp_symbol, pp_spec, pp_sizes, pp_seed, pp_trials); });

  auto* pb = probe->add_subcommand("paraproduct", "partition, bound or sharpness probe");
  std::string pb_exp = "partition";
  std::vector<int> pb_sizes;
  std::uint64_t pb_seed = 0;
  double pb_s1 = 1, pb_s2 = 1;
  int pb_trials = 0;
  pb->add_option("--experiment", pb_exp, "partition | bound | sharpness")->required();
  pb->add_option("--sizes", pb_sizes, "lattice sizes")->delimiter(',');
  pb->add_option("--seed", pb_seed, "rng seed")->required();
  pb->add_option("--s1", pb_s1, "isotropic exponent (bound probe)");
  pb->add_option("--s2", pb_s2, "factor-2 exponent (bound probe)");
  pb->add_option("--trials", pb_trials, "random pairs");
  pb->callback(
      [&] { rc = cmd_probe_paraproduct(pb_exp, pb_sizes, pb_seed, pb_s1, pb_s2, pb_trials); });

  auto* pt = probe->add_subcommand("trace", "per-shell trace ratios at chosen targets");
  std::string pt_case = "tangential";
  double pt_s1 = -1, pt_s2 = -1, pt_p = 2;
  std::vector<double> pt_eps = {0.0, 0.2};
  std::uint64_t pt_seed = 0;
  pt->add_option("--case", pt_case, "tangential | mixed");
  pt->add_option("--s1", pt_s1, "source exponent s1 (default per case)");
  pt->add_option("--s2", pt_s2, "source exponent s2 (default per case)");
  pt->add_option("--p", pt_p, "integrability (2 only)");
  pt->add_option("--target-eps", pt_eps, "extra target exponents to probe")->delimiter(',');
  pt->add_option("--seed", pt_seed, "rng seed")->required();
  pt->callback([&] { rc = cmd_probe_trace(pt_case, pt_s1, pt_s2, pt_p, pt_eps, pt_seed); });

  // bvp
  auto* bvp = app.add_subcommand("bvp", "half-cylinder boundary value problem");
  bvp->require_subcommand(1);

  auto* bs = bvp->add_subcommand("solve", "solve A u = f, B r1 u = g");
  std::string bs_bc = "dirichlet", bs_in, bs_g, bs_out;
  int bs_s1 = 0;
  double bs_s2 = 0.5;
  bs->add_option("--bc", bs_bc, "dirichlet | neumann | robin:<gamma> | pathological");
  bs->add_option("--s1", bs_s1, "norm grading s1 for the report");
  bs->add_option("--s2", bs_s2, "norm grading s2 for the report");
  bs->add_option("--in", bs_in, "interior data f (.fld, axis 0 is t)")->required();
  bs->add_option("--g", bs_g, "boundary data g (.fld on the boundary lattice)")->required();
  bs->add_option("--out", bs_out, "write the full solution (JSON mode list)");
  bs->callback([&] { rc = cmd_bvp_solve(bs_bc, bs_s1, bs_s2, bs_in, bs_g, bs_out); });

  auto* bp = bvp->add_subcommand("probe", "boundary-solver experiment aliases");
  std::string bp_exp = "calderon", bp_bc;
  std::vector<int> bp_sizes;
  std::uint64_t bp_seed = 0;
  bp->add_option("--experiment", bp_exp, "calderon | fredholm | estimate")->required();
  bp->add_option("--bc", bp_bc, "boundary condition override");
  bp->add_option("--sizes", bp_sizes, "boundary sizes")->delimiter(',');
  bp->add_option("--seed", bp_seed, "rng seed")->required();
  bp->callback([&] {
    ExperimentConfig cfg;
    if (bp_exp == "calderon") cfg.experiment = "bvp-identities";
    else if (bp_exp == "fredholm") cfg.experiment = "bvp-fredholm";
    else if (bp_exp == "estimate") cfg.experiment = "bvp-estimate";
    else throw std::invalid_argument("bvp probe experiment must be calderon, fredholm or estimate");
    cfg.sizes = bp_sizes;
    cfg.seed = bp_seed;
    if (!bp_bc.empty()) cfg.bc = bp_bc;
    rc = finish_experiment(run_experiment(cfg), "", "bvp-probe", true);
  });

  // run
  auto* run = app.add_subcommand("run", "run a named experiment");
  std::string r_name, r_bc, r_symbol, r_outdir, r_config;
  std::vector<int> r_sizes;
  std::uint64_t r_seed = 0;
  double r_p = 0, r_eps = 0, r_s1 = 0, r_s2 = 0;
  int r_trials = 0;
  run->add_option("experiment", r_name, "registered experiment name")->required();
  run->add_option("--sizes", r_sizes, "lattice sizes override")->delimiter(',');
  auto* r_seed_opt = run->add_option("--seed", r_seed, "rng seed (required here or in --config)");
  run->add_option("--bc", r_bc, "boundary condition override");
  run->add_option("--symbol", r_symbol, "symbol override");
  auto* r_p_opt = run->add_option("--p", r_p, "integrability override");
  auto* r_eps_opt = run->add_option("--eps", r_eps, "target shift override");
  auto* r_s1_opt = run->add_option("--s1", r_s1, "exponent override");
  auto* r_s2_opt = run->add_option("--s2", r_s2, "exponent override");
  auto* r_trials_opt = run->add_option("--trials", r_trials, "trial count override");
  run->add_option("--outdir", r_outdir, "write <outdir>/<experiment>.csv and .json");
  run->add_option("--config", r_config, "JSON config file; explicit flags win");
  run->callback([&] {
    ExperimentConfig cfg;
    cfg.experiment = r_name;
    bool have_seed = false;
    if (!r_config.empty()) {
      std::ifstream is(r_config);
      if (!is) throw std::runtime_error("cannot open config: " + r_config);
      ordered_json jc = ordered_json::parse(is);
      if (jc.contains("sizes")) cfg.sizes = jc["sizes"].get<std::vector<int>>();
      if (jc.contains("seed")) {
        cfg.seed = jc["seed"].get<std::uint64_t>();
        have_seed = true;
      }
      if (jc.contains("bc")) cfg.bc = jc["bc"].get<std::string>();
      if (jc.contains("symbol")) cfg.symbol = jc["symbol"].get<std::string>();
      if (jc.contains("p")) cfg.p = jc["p"].get<double>();
      if (jc.contains("eps")) cfg.eps = jc["eps"].get<double>();
      if (jc.contains("s1")) cfg.s1 = jc["s1"].get<double>();
      if (jc.contains("s2")) cfg.s2 = jc["s2"].get<double>();
      if (jc.contains("trials")) cfg.trials = jc["trials"].get<int>();
      if (jc.contains("outdir")) cfg.outdir = jc["outdir"].get<std::string>();
    }
    if (!r_sizes.empty()) cfg.sizes = r_sizes;
    if (r_seed_opt->count()) {
      cfg.seed = r_seed;
      have_seed = true;
    }
    if (!r_bc.empty()) cfg.bc = r_bc;
    if (!r_symbol.empty()) cfg.symbol = r_symbol;
    if (r_p_opt->count()) cfg.p = r_p;
    if (r_eps_opt->count()) cfg.eps = r_eps;
    if (r_s1_opt->count()) cfg.s1 = r_s1;
    if (r_s2_opt->count()) cfg.s2 = r_s2;
    if (r_trials_opt->count()) cfg.trials = r_trials;
    if (!r_outdir.empty()) cfg.outdir = r_outdir;
    if (!have_seed) throw std::invalid_argument("--seed is required (flag or config file)");
    rc = finish_experiment(run_experiment(cfg), cfg.outdir, "run", false);
  });

  // list registered experiments
  auto* lst = app.add_subcommand("list", "list registered experiments");
  lst->callback([&] {
    ordered_json j = base_summary("list");
    j["experiments"] = experiment_names();
    std::cout << j.dump(2) << std::endl;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
