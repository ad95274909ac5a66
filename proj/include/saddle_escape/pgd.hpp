#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "saddle_escape/oracles.hpp"
#include "saddle_escape/trace.hpp"

namespace saddle {

struct PgdConfig {
  double alpha = 0.5;
  long max_iters = 200000;
  double stop_tol = 1e-12;  // stop once ||x_{k+1} - x_k|| <= stop_tol
  bool record_trace = true;  // false keeps only the first and last records

  void validate() const;
  /// 0 < alpha < 2/3, the range in which the on-line dynamics are guaranteed.
  bool in_guaranteed_range() const { return alpha > 0 && alpha < 2.0 / 3.0; }
};

/// P_F(x - alpha grad f(x)).
Vector pgd_step(const ObjectiveOracle& o, const Polytope& P, const Vector& x, double alpha);

/// Closed-form next abscissa for iterates on the line y = -x:
/// x - alpha (1 - 2x^2) x exp(-2x^2) - (alpha / 2) x.
double online_update(double x, double alpha);

/// g(x) = (1 - 2x^2) exp(-2x^2).
double g_envelope(double x);

/// Left side of the one-step basin inequality,
/// -2 eps + 0.5 alpha + alpha (-3 eps + 4 eps^3) e^{-0.25} e^{-(0.5 + eps)^2}.
double basin_margin(double eps, double alpha);

/// basin_margin(eps, alpha) >= 0: every start in
/// B_eps = [0.5 - eps, 0.5] x [-0.5 - eps, -0.5] reaches the line in one step.
bool basin_condition(double eps, double alpha);

/// Runs projected gradient descent; records carry dist_origin on the
/// counterexample.
IterationTrace run_pgd(const Problem& problem, const PgdConfig& cfg);

struct LineInvarianceReport {
  double x0 = 0.0;
  double alpha = 0.0;
  long iterations = 0;
  double max_line_defect = 0.0;   // max |x_k + y_k|
  double max_increase = 0.0;      // max (x_{k+1} - x_k)
  double max_mismatch = 0.0;      // max |pgd_step - online_update| componentwise
  double min_x = 0.0;             // smallest x_k seen
  double final_x = 0.0;
  long first_below_1e8 = -1;      // first k with x_k <= 1e-8, or -1
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// Runs PGD on the counterexample from (x0, -x0) and checks the line
/// dynamics at tolerance 1e-12.
LineInvarianceReport line_invariance_check(double x0, double alpha, long iters);

struct BasinRun {
  Vector start;
  Vector first_iterate;
  double pre_projection_sum = 0.0;  // x + y of the raw first step
  long iterations = 0;
  double final_dist = 0.0;
  bool reached = false;             // final_dist <= tol
};

/// PGD from `samples` seeded uniform starts in B_eps on the counterexample.
std::vector<BasinRun> basin_sweep(double eps, double alpha, int samples, std::uint64_t seed, long max_iters,
                                  double dist_tol, Execution exec = Execution::parallel);

/// Uniform samples from B_eps with a seeded generator.
std::vector<Vector> sample_basin(double eps, int samples, std::uint64_t seed);

}  // namespace saddle
