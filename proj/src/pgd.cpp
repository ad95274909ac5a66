#include "saddle_escape/pgd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "saddle_escape/parallel.hpp"

namespace saddle {

namespace {

constexpr double kLineTol = 1e-12;

void require_guaranteed_alpha(double alpha, const char* who) {
  if (!(alpha > 0 && alpha < 2.0 / 3.0))
    throw InvalidInput(std::string(who) + ": alpha must lie in (0, 2/3)");
}

}  // namespace

void PgdConfig::validate() const {
  if (!(alpha > 0)) throw InvalidInput("pgd: alpha must be positive");
  if (max_iters < 0) throw InvalidInput("pgd: max_iters must be non-negative");
  if (!(stop_tol >= 0)) throw InvalidInput("pgd: stop_tol must be non-negative");
}

Vector pgd_step(const ObjectiveOracle& o, const Polytope& P, const Vector& x, double alpha) {
  if (!contains(P, x, kActivityTol)) throw InfeasiblePoint("pgd_step: x is not feasible");
  return project_polytope(P, x - alpha * o.gradient(x));
}

double g_envelope(double x) { return (1 - 2 * x * x) * std::exp(-2 * x * x); }

double online_update(double x, double alpha) {
  if (!(x >= 0)) throw InvalidInput("online_update: x must be non-negative");
  require_guaranteed_alpha(alpha, "online_update");
  return x - alpha * (1 - 2 * x * x) * x * std::exp(-2 * x * x) - 0.5 * alpha * x;
}

double basin_margin(double eps, double alpha) {
  const double e = std::exp(-0.25) * std::exp(-(0.5 + eps) * (0.5 + eps));
  return -2 * eps + 0.5 * alpha + alpha * (-3 * eps + 4 * eps * eps * eps) * e;
}

bool basin_condition(double eps, double alpha) {
  if (!(eps >= 0)) throw InvalidInput("basin_condition: eps must be non-negative");
  require_guaranteed_alpha(alpha, "basin_condition");
  return basin_margin(eps, alpha) >= 0;
}

IterationTrace run_pgd(const Problem& problem, const PgdConfig& cfg) {
  validate(problem);
  cfg.validate();
  const bool track_origin = problem.kind == "counterexample";
  auto make_record = [&](long k, const Vector& x) {
    IterationRecord r;
    r.k = k;
    r.f = problem.oracle.value(x);
    r.X = std::numeric_limits<double>::quiet_NaN();
    r.psi = std::numeric_limits<double>::quiet_NaN();
    r.kind = StepKind::projected_gradient;
    r.step_length = cfg.alpha;
    r.x = x;
    if (track_origin) r.dist_origin = x.norm();
    return r;
  };

  IterationTrace trace;
  Vector x = problem.x0;
  trace.records.push_back(make_record(0, x));
  trace.status = RunStatus::max_iters;
  for (long k = 0; k < cfg.max_iters; ++k) {
    Vector next = pgd_step(problem.oracle, problem.feasible_set, x, cfg.alpha);
    const double moved = (next - x).norm();
    x = std::move(next);
    IterationRecord r = make_record(k + 1, x);
    if (cfg.record_trace || trace.records.size() < 2)
      trace.records.push_back(std::move(r));
    else
      trace.records.back() = std::move(r);
    if (moved <= cfg.stop_tol) {
      trace.status = RunStatus::converged;
      break;
    }
  }
  trace.records.back().kind = StepKind::terminate;
  trace.records.back().step_length = 0.0;
  return trace;
}

LineInvarianceReport line_invariance_check(double x0, double alpha, long iters) {
  if (!(x0 >= 0)) throw InvalidInput("line_invariance_check: x0 must be non-negative");
  require_guaranteed_alpha(alpha, "line_invariance_check");

  const Problem problem = counterexample_problem();
  LineInvarianceReport rep;
  rep.x0 = x0;
  rep.alpha = alpha;
  Vector z(2);
  z << x0, -x0;
  rep.min_x = x0;
  if (x0 <= 1e-8) rep.first_below_1e8 = 0;

  for (long k = 0; k < iters; ++k) {
    const Vector next = pgd_step(problem.oracle, problem.feasible_set, z, alpha);
    const double closed = online_update(std::max(z(0), 0.0), alpha);
    rep.max_line_defect = std::max(rep.max_line_defect, std::abs(next(0) + next(1)));
    rep.max_increase = std::max(rep.max_increase, next(0) - z(0));
    rep.max_mismatch = std::max({rep.max_mismatch, std::abs(next(0) - closed), std::abs(next(1) + closed)});
    rep.iterations = k + 1;
    const bool fixed = next == z;
    z = next;
    rep.min_x = std::min(rep.min_x, z(0));
    if (rep.first_below_1e8 < 0 && z(0) <= 1e-8) rep.first_below_1e8 = k + 1;
    if (z(0) < -kLineTol) break;
    // Past the normal range the contraction has underflowed.
    if (fixed || z(0) < std::numeric_limits<double>::min()) break;
  }
  rep.final_x = z(0);

  if (rep.max_line_defect > kLineTol) rep.failures.push_back("iterate left the line x + y = 0");
  if (rep.max_increase > kLineTol) rep.failures.push_back("x_k increased");
  if (rep.max_mismatch > kLineTol) rep.failures.push_back("projected step disagrees with the closed-form update");
  if (rep.min_x < -kLineTol) rep.failures.push_back("x_k became negative");
  if (rep.final_x > 1e-8) rep.failures.push_back("x_k did not reach 1e-8");
  return rep;
}

std::vector<Vector> sample_basin(double eps, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.5 - eps, 0.5);
  std::uniform_real_distribution<double> uy(-0.5 - eps, -0.5);
  std::vector<Vector> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    Vector s(2);
    s(0) = ux(rng);
    s(1) = uy(rng);
    out.push_back(s);
  }
  return out;
}

std::vector<BasinRun> basin_sweep(double eps, double alpha, int samples, std::uint64_t seed, long max_iters,
                                  double dist_tol, Execution exec) {
  if (samples < 0) throw InvalidInput("basin_sweep: negative sample count");
  const std::vector<Vector> starts = sample_basin(eps, samples, seed);
  const Problem base = counterexample_problem();
  std::vector<BasinRun> runs(starts.size());

  auto run_one = [&](std::size_t i) {
    Problem p = base;
    p.x0 = starts[i];
    BasinRun& r = runs[i];
    r.start = starts[i];
    const Vector raw = starts[i] - alpha * p.oracle.gradient(starts[i]);
    r.pre_projection_sum = raw(0) + raw(1);
    r.first_iterate = pgd_step(p.oracle, p.feasible_set, starts[i], alpha);
    PgdConfig cfg{.alpha = alpha, .max_iters = max_iters, .stop_tol = 1e-12, .record_trace = false};
    const IterationTrace t = run_pgd(p, cfg);
    r.iterations = t.final().k;
    r.final_dist = t.final().x.norm();
    r.reached = r.final_dist <= dist_tol;
  };

  const auto n = static_cast<std::ptrdiff_t>(runs.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(thread_cap())
    for (std::ptrdiff_t i = 0; i < n; ++i) run_one(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) run_one(static_cast<std::size_t>(i));
  }
  return runs;
}

}  // namespace saddle
