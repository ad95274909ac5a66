#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "saddle_escape/hardness.hpp"
#include "saddle_escape/io.hpp"
#include "saddle_escape/pgd.hpp"
#include "saddle_escape/sofw.hpp"
#include "saddle_escape/stationarity.hpp"
#include "saddle_escape/verification.hpp"

using namespace saddle;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;

Problem problem_or_default(const std::string& path) {
  return path.empty() ? counterexample_problem() : load_problem(path);
}

void apply_x0(Problem& p, const std::string& x0) {
  if (x0.empty()) return;
  p.x0 = parse_point(x0);
  if (p.x0.size() != p.oracle.dim())
    throw InvalidInput("--x0 has " + std::to_string(p.x0.size()) + " components, problem dimension is " +
                       std::to_string(p.oracle.dim()));
  if (!contains(p.feasible_set, p.x0, kActivityTol)) throw InvalidInput("--x0 is not feasible");
}

// Writes to `path`, or to stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

void write_trace(const std::string& path, const IterationTrace& trace) {
  if (path.empty()) return;
  std::ostringstream os;
  write_trace_csv(os, trace);
  emit(path, os.str());
}

struct SofwArgs {
  std::string problem, x0, trace, summary;
  double eps_g = 1e-4, eps_H = 1e-4;
  long max_iters = 100000;
};

int cmd_sofw(const SofwArgs& a) {
  Problem p = load_problem(a.problem);
  apply_x0(p, a.x0);
  const SofwConfig cfg = SofwConfig::from_constants(p.oracle.constants(), a.eps_g, a.eps_H, a.max_iters);
  const IterationTrace trace = run_sofw(p, cfg);
  write_trace(a.trace, trace);

  const IterationRecord& last = trace.final();
  const std::vector<long> violations = verify_decrease(trace, cfg);
  bool feasible = true;
  for (const IterationRecord& r : trace.records) feasible = feasible && contains(p.feasible_set, r.x, kActivityTol);
  const ComplexityBound bound = complexity_bound(cfg, p.oracle.value(p.x0), p.f_min);
  const long iters = trace.steps();
  const bool bound_respected = static_cast<double>(iters) <= bound.joint &&
                               static_cast<double>(count_first_order_violations(trace, a.eps_g)) <= bound.first_order;
  const Verdict verdict = last.X <= a.eps_g ? (last.psi <= a.eps_H ? Verdict::sosp : Verdict::fosp) : Verdict::neither;

  const json summary{{"iters", iters},
                     {"status", std::string(to_string(trace.status))},
                     {"final_x", to_json(last.x)},
                     {"f", last.f},
                     {"X", last.X},
                     {"psi", last.psi},
                     {"verdict", std::string(to_string(verdict))},
                     {"bound", bound.joint},
                     {"first_order_bound", bound.first_order},
                     {"bound_respected", bound_respected},
                     {"decrease_violations", violations},
                     {"feasible", feasible}};
  emit(a.summary, summary.dump(2) + "\n");

  if (!violations.empty() || !feasible || !bound_respected) {
    std::cerr << "sofw: invariant violated (decrease, feasibility or complexity bound)\n";
    return kExitInvariant;
  }
  return kExitOk;
}

struct PgdArgs {
  std::string problem, x0, trace, summary;
  double alpha = 0.5;
  long max_iters = 200000;
  double stop_tol = 1e-12;
  bool basin_sweep = false;
  double eps = 0.05;
  int samples = 50;
  std::uint64_t seed = 7;
  double dist_tol = 1e-5;
};

int cmd_pgd(const PgdArgs& a) {
  PgdConfig cfg;
  cfg.alpha = a.alpha;
  cfg.max_iters = a.max_iters;
  cfg.stop_tol = a.stop_tol;
  cfg.validate();
  if (!cfg.in_guaranteed_range())
    std::cerr << "warning: alpha = " << a.alpha
              << " lies outside (0, 2/3); the line dynamics are not guaranteed to reach the origin\n";

  if (a.basin_sweep) {
    const bool condition = basin_condition(a.eps, a.alpha);
    const std::vector<BasinRun> runs = basin_sweep(a.eps, a.alpha, a.samples, a.seed, a.max_iters, a.dist_tol);
    json rows = json::array();
    long reached = 0;
    for (const BasinRun& r : runs) {
      reached += r.reached ? 1 : 0;
      rows.push_back(json{{"start", to_json(r.start)},
                          {"first_iterate", to_json(r.first_iterate)},
                          {"pre_projection_sum", r.pre_projection_sum},
                          {"iterations", r.iterations},
                          {"final_dist", r.final_dist},
                          {"reached", r.reached}});
    }
    const json summary{{"eps", a.eps},
                       {"alpha", a.alpha},
                       {"basin_margin", basin_margin(a.eps, a.alpha)},
                       {"basin_condition", condition},
                       {"samples", a.samples},
                       {"seed", a.seed},
                       {"reached", reached},
                       {"runs", rows}};
    emit(a.summary, summary.dump(2) + "\n");
    return reached == static_cast<long>(runs.size()) ? kExitOk : kExitInvariant;
  }

  Problem p = problem_or_default(a.problem);
  apply_x0(p, a.x0);
  const IterationTrace trace = run_pgd(p, cfg);
  write_trace(a.trace, trace);
  const IterationRecord& last = trace.final();
  json summary{{"iters", trace.steps()},
               {"status", std::string(to_string(trace.status))},
               {"final_x", to_json(last.x)},
               {"f", last.f}};
  if (last.dist_origin) summary["dist_origin"] = *last.dist_origin;
  emit(a.summary, summary.dump(2) + "\n");
  return kExitOk;
}

struct StationarityArgs {
  std::string problem, x;
  double eps_g = 1e-4, eps_H = 1e-4;
};

int cmd_stationarity(const StationarityArgs& a) {
  Problem p = problem_or_default(a.problem);
  const Vector x = a.x.empty() ? p.x0 : parse_point(a.x);
  if (x.size() != p.oracle.dim()) throw InvalidInput("--x has the wrong dimension");
  if (!contains(p.feasible_set, x, kActivityTol)) throw InfeasiblePoint("--x is not feasible");
  const StationarityReport r = classify(p.oracle, p.feasible_set, x, a.eps_g, a.eps_H);
  std::cout << to_json(r).dump(2) << "\n";
  return kExitOk;
}

struct HardnessArgs {
  int exhaustive_n = 0;
  std::string graph;
  int t = 0;
  int random = 0;
  int n_min = 6, n_max = 8;
  std::uint64_t seed = 1;
  bool rows = false;
};

int cmd_hardness(const HardnessArgs& a) {
  std::vector<CorrespondenceReport> reports;
  if (!a.graph.empty()) {
    const Graph G = load_graph(a.graph);
    if (a.t == 0) {
      for (int t = 1; t <= G.size(); ++t) reports.push_back(check_correspondence(G, t));
    } else {
      reports.push_back(check_correspondence(G, a.t));
    }
  }
  if (a.exhaustive_n > 0) {
    const auto sweep = sweep_exhaustive(a.exhaustive_n);
    reports.insert(reports.end(), sweep.begin(), sweep.end());
  }
  if (a.random > 0) {
    const auto sweep = sweep_random(a.random, a.n_min, a.n_max, a.seed);
    reports.insert(reports.end(), sweep.begin(), sweep.end());
  }
  if (reports.empty()) throw InvalidInput("hardness: give --graph, --exhaustive-n or --random");

  long failed = 0;
  json rows = json::array();
  for (const CorrespondenceReport& r : reports) {
    if (!r.equivalence_holds || !r.dichotomy_holds) ++failed;
    if (a.rows || !a.graph.empty()) rows.push_back(to_json(r));
  }
  json out{{"instances", reports.size()}, {"failed", failed}, {"passed", failed == 0}};
  if (!rows.empty()) out["rows"] = rows;
  std::cout << out.dump(2) << "\n";
  return failed == 0 ? kExitOk : kExitInvariant;
}

struct VerifyArgs {
  int instances = 500;
  int trs_instances = 500;
  int fd_points = 100;
  std::uint64_t seed = 1;
  std::vector<std::string> problems;
  std::string output;
};

int cmd_verify(const VerifyArgs& a) {
  VerifyOptions opts;
  opts.instances = a.instances;
  opts.trs_instances = a.trs_instances;
  opts.trs_hard_cases = std::min(40, a.trs_instances);
  opts.fd_points = a.fd_points;
  opts.seed = a.seed;
  for (const std::string& path : a.problems) opts.problems.push_back(load_problem(path));
  const VerifyReport report = run_verification(opts);
  emit(a.output, to_json(report).dump(2) + "\n");
  if (!report.passed()) {
    for (const CheckResult& c : report.checks)
      if (!c.passed()) std::cerr << "verify: " << c.name << " failed " << c.failed << "/" << c.checked << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order stationarity tools for smooth problems over polytopes"};
  app.require_subcommand(1);

  SofwArgs sofw;
  auto* s = app.add_subcommand("sofw", "Run the second-order Frank-Wolfe method");
  s->add_option("--problem", sofw.problem, "Problem JSON file")->required()->check(CLI::ExistingFile);
  s->add_option("--eps-g", sofw.eps_g, "First-order tolerance")->check(CLI::PositiveNumber);
  s->add_option("--eps-H", sofw.eps_H, "Second-order tolerance")->check(CLI::PositiveNumber);
  s->add_option("--x0", sofw.x0, "Start point, comma separated");
  s->add_option("--max-iters", sofw.max_iters, "Iteration limit")->check(CLI::PositiveNumber);
  s->add_option("--trace", sofw.trace, "Trace CSV output ('-' for stdout)");
  s->add_option("--summary", sofw.summary, "Summary JSON output (default stdout)");

  PgdArgs pgd;
  auto* g = app.add_subcommand("pgd", "Run projected gradient descent");
  g->add_option("--problem", pgd.problem, "Problem JSON file (default: the bundled counterexample)")
      ->check(CLI::ExistingFile);
  g->add_option("--alpha", pgd.alpha, "Constant step size");
  g->add_option("--x0", pgd.x0, "Start point, comma separated");
  g->add_option("--max-iters", pgd.max_iters, "Iteration limit");
  g->add_option("--stop-tol", pgd.stop_tol, "Stop once an iterate moves less than this");
  g->add_option("--trace", pgd.trace, "Trace CSV output ('-' for stdout)");
  g->add_option("--summary", pgd.summary, "Summary JSON output (default stdout)");
  g->add_flag("--basin-sweep", pgd.basin_sweep, "Run from seeded starts in the basin box");
  g->add_option("--eps", pgd.eps, "Basin box half-width")->check(CLI::NonNegativeNumber);
  g->add_option("--samples", pgd.samples, "Basin sweep sample count")->check(CLI::NonNegativeNumber);
  g->add_option("--seed", pgd.seed, "Basin sweep seed");
  g->add_option("--dist-tol", pgd.dist_tol, "Distance to the origin that counts as reached");

  StationarityArgs st;
  auto* c = app.add_subcommand("stationarity", "Classify a point");
  c->add_option("--problem", st.problem, "Problem JSON file (default: the bundled counterexample)")
      ->check(CLI::ExistingFile);
  c->add_option("--x", st.x, "Point, comma separated (default: the problem's x0)");
  c->add_option("--eps-g", st.eps_g, "First-order tolerance")->check(CLI::PositiveNumber);
  c->add_option("--eps-H", st.eps_H, "Second-order tolerance")->check(CLI::PositiveNumber);

  HardnessArgs hd;
  auto* h = app.add_subcommand("hardness", "Check the copositivity / stable-set correspondence");
  h->add_option("--exhaustive-n", hd.exhaustive_n, "Every graph on up to this many vertices")
      ->check(CLI::Range(1, 6));
  h->add_option("--graph", hd.graph, "Graph file (edge list or JSON)")->check(CLI::ExistingFile);
  h->add_option("--t", hd.t, "Stable-set size for --graph (default: every t)");
  h->add_option("--random", hd.random, "Number of seeded random graphs")->check(CLI::NonNegativeNumber);
  h->add_option("--n-min", hd.n_min, "Smallest random graph size");
  h->add_option("--n-max", hd.n_max, "Largest random graph size");
  h->add_option("--seed", hd.seed, "Random sweep seed");
  h->add_flag("--rows", hd.rows, "Print every instance row");

  VerifyArgs vf;
  auto* v = app.add_subcommand("verify", "Finite-difference and subsolver cross-checks");
  v->add_option("--instances", vf.instances, "Random direction instances per oracle")->check(CLI::PositiveNumber);
  v->add_option("--trs-instances", vf.trs_instances, "Random trust-region instances")->check(CLI::PositiveNumber);
  v->add_option("--fd-points", vf.fd_points, "Finite-difference sample points per problem")
      ->check(CLI::PositiveNumber);
  v->add_option("--seed", vf.seed, "Seed");
  v->add_option("--problem", vf.problems, "Problem JSON file(s) to audit instead of the bundled ones")
      ->check(CLI::ExistingFile);
  v->add_option("--output", vf.output, "Report JSON output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s) return cmd_sofw(sofw);
    if (*g) return cmd_pgd(pgd);
    if (*c) return cmd_stationarity(st);
    if (*h) return cmd_hardness(hd);
    if (*v) return cmd_verify(vf);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitUsage;
}
