#include "saddle_escape/sofw.hpp"

#include <algorithm>
#include <cmath>

namespace saddle {

namespace {

// Measures at or below this are treated as exactly zero (no subproblem step).
constexpr double kExactZero = 1e-12;

}  // namespace

std::string_view to_string(StepKind k) {
  switch (k) {
    case StepKind::first_order: return "FO";
    case StepKind::second_order: return "SO";
    case StepKind::projected_gradient: return "PG";
    case StepKind::terminate: break;
  }
  return "terminate";
}

std::string_view to_string(RunStatus s) { return s == RunStatus::converged ? "converged" : "max_iters"; }

long IterationTrace::steps() const {
  return static_cast<long>(std::count_if(records.begin(), records.end(),
                                         [](const IterationRecord& r) { return r.kind != StepKind::terminate; }));
}

SofwConfig SofwConfig::from_constants(const SmoothnessConstants& k, double eps_g, double eps_H, long max_iters) {
  SofwConfig cfg;
  cfg.L_tilde = std::max(k.L, k.g_max);
  cfg.rho_tilde = std::max({k.rho, k.H_max, 1e-8});
  cfg.eps_g = eps_g;
  cfg.eps_H = eps_H;
  cfg.max_iters = max_iters;
  return cfg;
}

void SofwConfig::validate() const {
  if (!(L_tilde > 0) || !(rho_tilde > 0)) throw InvalidInput("sofw: L_tilde and rho_tilde must be positive");
  if (!(eps_g >= 0) || !(eps_H >= 0)) throw InvalidInput("sofw: tolerances must be non-negative");
  if (max_iters < 1) throw InvalidInput("sofw: max_iters must be at least 1");
}

SofwStep sofw_step(const ObjectiveOracle& o, const Polytope& P, const Vector& x, const SofwConfig& cfg, long k,
                   Execution exec) {
  cfg.validate();
  if (x.size() != P.dim()) throw DimensionMismatch("sofw_step: dimension mismatch");
  if (!contains(P, x, kActivityTol)) throw InfeasiblePoint("sofw_step: iterate is not feasible");

  const Vector g = o.gradient(x);
  const DirectionSolution lmo = solve_lmo(g, P, x, exec);
  const DirectionSolution qmo = solve_qmo(o.hessian(x), g, P, x, exec);
  double X = -lmo.value;
  double psi = -qmo.value;
  if (X <= kExactZero) X = 0.0;
  if (psi <= kExactZero) psi = 0.0;

  SofwStep out;
  out.record.k = k;
  out.record.f = o.value(x);
  out.record.X = X;
  out.record.psi = psi;
  out.record.x = x;
  out.x_next = x;

  if ((X == 0.0 && psi == 0.0) || (X <= cfg.eps_g && psi <= cfg.eps_H)) {
    out.record.kind = StepKind::terminate;
    return out;
  }

  const double fo_gain = X * X / (2 * cfg.L_tilde);
  const double so_gain = 2 * psi * psi * psi / (3 * cfg.rho_tilde * cfg.rho_tilde);
  if (fo_gain >= so_gain) {
    double step = X / cfg.L_tilde;
    if (cfg.clamp_steps) step = std::min(1.0, step);
    out.record.kind = StepKind::first_order;
    out.record.step_length = step;
    out.x_next = x + step * lmo.direction;
  } else {
    double step = 2 * psi / cfg.rho_tilde;
    if (cfg.clamp_steps) step = std::min(1.0, step);
    out.record.kind = StepKind::second_order;
    out.record.step_length = step;
    out.x_next = x + step * qmo.direction;
  }
  return out;
}

IterationTrace run_sofw(const Problem& problem, const SofwConfig& cfg, Execution exec) {
  validate(problem);
  cfg.validate();
  IterationTrace trace;
  Vector x = problem.x0;
  for (long k = 0;; ++k) {
    SofwStep step = sofw_step(problem.oracle, problem.feasible_set, x, cfg, k, exec);
    if (step.record.kind == StepKind::terminate) {
      trace.records.push_back(std::move(step.record));
      trace.status = RunStatus::converged;
      break;
    }
    if (k == cfg.max_iters) {
      step.record.kind = StepKind::terminate;
      step.record.step_length = 0.0;
      trace.records.push_back(std::move(step.record));
      trace.status = RunStatus::max_iters;
      break;
    }
    trace.records.push_back(std::move(step.record));
    x = std::move(step.x_next);
  }
  return trace;
}

std::vector<long> verify_decrease(const IterationTrace& trace, const SofwConfig& cfg) {
  std::vector<long> bad;
  for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
    const IterationRecord& r = trace.records[i];
    if (r.kind != StepKind::first_order && r.kind != StepKind::second_order) continue;
    const double need = std::max(r.X * r.X / (2 * cfg.L_tilde),
                                 2 * r.psi * r.psi * r.psi / (3 * cfg.rho_tilde * cfg.rho_tilde));
    if (r.f - trace.records[i + 1].f < need - 1e-9) bad.push_back(r.k);
  }
  return bad;
}

ComplexityBound complexity_bound(const SofwConfig& cfg, double f0, double f_min) {
  if (!(cfg.eps_g > 0) || !(cfg.eps_H > 0)) throw InvalidInput("complexity_bound: tolerances must be positive");
  if (f0 < f_min) throw InvalidInput("complexity_bound: f0 is below f_min");
  const double gap = f0 - f_min;
  ComplexityBound b;
  b.first_order = 2 * cfg.L_tilde * gap / (cfg.eps_g * cfg.eps_g);
  b.joint = gap / std::min(cfg.eps_g * cfg.eps_g / (2 * cfg.L_tilde),
                           2 * cfg.eps_H * cfg.eps_H * cfg.eps_H / (3 * cfg.rho_tilde * cfg.rho_tilde));
  return b;
}

long count_first_order_violations(const IterationTrace& trace, double eps_g) {
  return static_cast<long>(std::count_if(trace.records.begin(), trace.records.end(),
                                         [&](const IterationRecord& r) { return r.X > eps_g; }));
}

}  // namespace saddle
