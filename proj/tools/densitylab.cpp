#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "densitylab/constructions.hpp"
#include "densitylab/optimizer.hpp"
#include "densitylab/oracles.hpp"
#include "densitylab/profile.hpp"
#include "densitylab/report.hpp"

using namespace dlab;

namespace {

constexpr int kOk = 0;
constexpr int kAssertionFailed = 1;
constexpr int kUsage = 2;

struct Options {
  bool json = false;

  std::string analyze_file;
  std::string analyze_delta;
  std::string profiles_dir;
  int profile_samples = 0;

  std::string cmsn_m, cmsn_s;
  long cmsn_n = 0;
  bool cmsn_optimal = false;
  long cmsn_max_den = 1'000'000;
  std::string cmsn_table;

  std::string h_eps;
  int h_depth = 0;
  std::string h_base;

  std::string cubic;

  int opt_r = 1;
  std::size_t opt_restarts = 1;
  std::size_t opt_iters = 1000;
  std::uint64_t opt_seed = 0;
  std::string opt_init, opt_trace, opt_best;

  std::string inspect_file, inspect_delta;

  std::uint64_t l1_trials = 1000;
  std::string l1_delta = "1/4";
  std::uint64_t l1_seed = 0;

  std::string quarter_file;
};

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

int run_analyze(const Options& o) {
  Configuration c = read_config(o.analyze_file);
  std::optional<Rational> delta;
  if (!o.analyze_delta.empty()) {
    delta = parse_rational(o.analyze_delta);
    if (*delta <= 0 || *delta > make_rational(1, 2)) throw ParseError("--delta must lie in (0, 1/2]");
  }
  AnalysisReport rep = analyze(c, delta);
  if (!o.profiles_dir.empty()) {
    std::filesystem::create_directories(o.profiles_dir);
    for (const auto& e : c.endpoints()) {
      std::ofstream out(std::filesystem::path(o.profiles_dir) / ("endpoint_" + std::to_string(e.index) + ".csv"));
      write_profile_csv(out, density_profile(c, e), o.profile_samples);
    }
  }
  if (o.json) {
    emit(to_json(rep));
    return kOk;
  }
  std::cout << "intervals: " << c.interval_count() << '\n'
            << "delta_star: " << to_string(rep.delta_star) << " (" << to_decimal(rep.delta_star, 15) << ")\n"
            << "argmin endpoint: " << to_string(c.endpoint(rep.argmin).value) << '\n';
  if (rep.decision)
    std::cout << "refutes K(" << to_string(*rep.delta) << "): " << (rep.decision->refutes ? "yes" : "no") << '\n';
  std::cout << "input hash: " << rep.input_hash << '\n';
  return kOk;
}

int run_cmsn(const Options& o) {
  CmsnParams p;
  if (o.cmsn_optimal) {
    p = optimal_cmsn(o.cmsn_n, o.cmsn_max_den);
  } else {
    if (o.cmsn_m.empty() || o.cmsn_s.empty()) throw ParseError("construct cmsn needs --m and --s, or --optimal");
    p.m = parse_rational(o.cmsn_m);
    p.s = parse_rational(o.cmsn_s);
    p.n = o.cmsn_n;
  }
  Configuration c = build_cmsn(p);
  if (!o.cmsn_table.empty()) {
    Json rows = Json::array();
    for (const auto& row : cmsn_table(p)) rows.push_back(to_json(row));
    Json t{{"m", to_string(p.m)}, {"s", to_string(p.s)}, {"N", p.n}, {"rows", rows}};
    write_file(o.cmsn_table, t.dump(2) + "\n");
  }
  emit(config_to_json(c));
  return kOk;
}

int run_h_approx(const Options& o) {
  Configuration base = read_config(o.h_base);
  HApprox h = build_h_approx(base, parse_rational(o.h_eps), o.h_depth);
  const IntervalSet& deepest = h.levels.back();
  Json j;
  j["intervals"] = to_json(deepest);
  j["epsilon"] = to_string(h.epsilon);
  j["depth"] = h.depth;
  Json sizes = Json::array();
  for (const auto& lvl : h.levels) sizes.push_back(lvl.size());
  j["level_sizes"] = sizes;
  j["measure"] = to_string(deepest.measure());
  emit(j);
  return kOk;
}

int run_solve_cubic(const Options& o) {
  BoundConstant c = solve_constant(o.cubic);
  if (o.json) {
    emit(to_json(c));
  } else {
    std::cout << c.name << ' ' << to_decimal(c.value, 15) << " residual " << c.residual << '\n';
  }
  return kOk;
}

int run_optimize(const Options& o) {
  SearchOptions so;
  so.r = o.opt_r;
  so.restarts = o.opt_restarts;
  so.iters = o.opt_iters;
  so.seed = o.opt_seed;
  if (!o.opt_init.empty()) so.init = read_config(o.opt_init);
  SearchResult res = search(so);
  if (!o.opt_trace.empty()) {
    std::ofstream out(o.opt_trace, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + o.opt_trace + "'");
    write_trace_csv(out, res);
  }
  if (!o.opt_best.empty()) write_file(o.opt_best, config_to_json(res.best_config).dump(2) + "\n");
  emit(to_json(res));
  return kOk;
}

int run_inspect(const Options& o) {
  Configuration c = read_config(o.inspect_file);
  Rational delta = parse_rational(o.inspect_delta);
  ProofInspection insp = proof_inspect(c, delta);
  Json j = to_json(insp);
  if (insp.complete) j["inequality_chain"] = to_json(final_inequality_chain(insp));
  // Probe Lemma 2 wherever the dichotomy fails, in original coordinates.
  Json probes = Json::array();
  const Rational half = make_rational(1, 2);
  for (const auto& ce : insp.colored) {
    const Rational& v = ce.endpoint.value;
    bool black_side = ce.color == Color::Black && v <= half;
    bool white_side = ce.color == Color::White && v >= half;
    if (!black_side && !white_side) continue;
    bool holds = black_side ? (ce.omega_p < v || ce.omega_p >= 1 - v) : (ce.omega_p < 1 - v || ce.omega_p >= v);
    if (holds) continue;
    Endpoint original = c.endpoint(ce.endpoint.index);
    probes.push_back(to_json(lemma2_probe(c, delta, original)));
  }
  j["lemma2_probes"] = probes;
  emit(j);
  return insp.asserted_ok() ? kOk : kAssertionFailed;
}

int run_lemma1(const Options& o) {
  Rational delta = parse_rational(o.l1_delta);
  Lemma1Suite s = run_lemma1_suite(o.l1_trials, delta, o.l1_seed);
  Json j = to_json(s);
  j["delta"] = to_string(delta);
  j["seed"] = o.l1_seed;
  emit(j);
  return s.violations == 0 ? kOk : kAssertionFailed;
}

int run_quarter(const Options& o) {
  Configuration c = read_config(o.quarter_file);
  Endpoint p = quarter_point(c);
  EndpointStats st = profile_extrema(c, p);
  if (o.json) {
    emit(Json{{"endpoint", to_json(p)}, {"stats", to_json(st)}});
  } else {
    std::cout << "quarter point: " << to_string(p.value) << " (" << to_string(p.kind) << ")\n"
              << "inf density: " << to_string(st.inf_density) << "\n"
              << "sup density: " << to_string(st.sup_density) << "\n"
              << "escape: " << to_string(st.escape) << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact analysis of interval configurations and their density profiles"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "Machine-readable output");

  auto* analyze_cmd = app.add_subcommand("analyze", "delta*(C), per-endpoint extrema and witnesses");
  analyze_cmd->add_option("file", o.analyze_file, "Configuration JSON, or - for stdin")->required();
  analyze_cmd->add_option("--delta", o.analyze_delta, "Also decide whether C refutes K(delta)");
  analyze_cmd->add_option("--profiles", o.profiles_dir, "Write one density CSV per endpoint here");
  analyze_cmd->add_option("--samples", o.profile_samples, "Interior samples per profile piece")->check(CLI::NonNegativeNumber);

  auto* construct_cmd = app.add_subcommand("construct", "Build the explicit constructions");
  construct_cmd->require_subcommand(1);
  auto* cmsn_cmd = construct_cmd->add_subcommand("cmsn", "The comb C(m, s, N)");
  cmsn_cmd->add_option("--m", o.cmsn_m, "Support length m");
  cmsn_cmd->add_option("--s", o.cmsn_s, "Tooth fraction s");
  cmsn_cmd->add_option("--N,-N", o.cmsn_n, "Number of teeth")->required()->check(CLI::PositiveNumber);
  cmsn_cmd->add_flag("--optimal", o.cmsn_optimal, "Use the optimal (m, s)");
  cmsn_cmd->add_option("--max-den", o.cmsn_max_den, "Denominator bound for the optimal parameters")->check(CLI::PositiveNumber);
  cmsn_cmd->add_option("--table", o.cmsn_table, "Write the endpoint/radius/density table to this file");
  auto* h_cmd = construct_cmd->add_subcommand("h-approx", "Finite-depth self-similar set H_depth");
  h_cmd->add_option("--eps", o.h_eps, "Scale factor epsilon")->required();
  h_cmd->add_option("--depth", o.h_depth, "Recursion depth")->required()->check(CLI::PositiveNumber);
  h_cmd->add_option("--base", o.h_base, "Base configuration JSON")->required();

  auto* cubic_cmd = app.add_subcommand("solve-cubic", "Bound constants by exact bisection");
  cubic_cmd->add_option("which", o.cubic, "upper, lower, kolyada or conjecture")
      ->required()
      ->check(CLI::IsMember({"upper", "lower", "kolyada", "conjecture"}));

  auto* opt_cmd = app.add_subcommand("optimize", "Multi-start simplex search minimizing delta*");
  opt_cmd->add_option("--intervals", o.opt_r, "Number of intervals r")->check(CLI::PositiveNumber);
  opt_cmd->add_option("--restarts", o.opt_restarts, "Independent restarts")->check(CLI::PositiveNumber);
  opt_cmd->add_option("--iters", o.opt_iters, "Simplex iterations per restart");
  opt_cmd->add_option("--seed", o.opt_seed, "Master seed");
  opt_cmd->add_option("--init", o.opt_init, "Start from this configuration");
  opt_cmd->add_option("--trace", o.opt_trace, "Iteration trace CSV");
  opt_cmd->add_option("--best", o.opt_best, "Write the best configuration JSON here");

  auto* inspect_cmd = app.add_subcommand("inspect", "Evaluate the proof quantities on a counterexample");
  inspect_cmd->add_option("file", o.inspect_file, "Configuration JSON, or - for stdin")->required();
  inspect_cmd->add_option("--delta", o.inspect_delta, "delta with delta*(C) < delta < 1/2")->required();

  auto* l1_cmd = app.add_subcommand("check-lemma1", "Randomized overlap-bound suite");
  l1_cmd->add_option("--trials", o.l1_trials, "Number of random systems");
  l1_cmd->add_option("--delta", o.l1_delta, "delta in (0, 1)");
  l1_cmd->add_option("--seed", o.l1_seed, "Master seed");

  auto* quarter_cmd = app.add_subcommand("quarter-point", "Endpoint whose densities stay in [1/4, 3/4]");
  quarter_cmd->add_option("file", o.quarter_file, "Configuration JSON, or - for stdin")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze_cmd) return run_analyze(o);
    if (*cmsn_cmd) return run_cmsn(o);
    if (*h_cmd) return run_h_approx(o);
    if (*cubic_cmd) return run_solve_cubic(o);
    if (*opt_cmd) return run_optimize(o);
    if (*inspect_cmd) return run_inspect(o);
    if (*l1_cmd) return run_lemma1(o);
    if (*quarter_cmd) return run_quarter(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "assertion failed: " << e.what() << '\n';
    return kAssertionFailed;
  }
  return kUsage;
}
