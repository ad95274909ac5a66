#pragma once

#include <vector>

#include "saddle_escape/oracles.hpp"
#include "saddle_escape/stationarity.hpp"
#include "saddle_escape/trace.hpp"

namespace saddle {

struct SofwConfig {
  double L_tilde = 1.0;    // max{L, g_max}
  double rho_tilde = 1.0;  // max{rho, H_max}
  double eps_g = 1e-4;
  double eps_H = 1e-4;
  long max_iters = 100000;
  bool clamp_steps = true;

  /// L_tilde = max{L, g_max}; rho_tilde = max{rho, H_max, 1e-8}.
  static SofwConfig from_constants(const SmoothnessConstants& k, double eps_g, double eps_H,
                                   long max_iters = 100000);
  void validate() const;
};

struct SofwStep {
  Vector x_next;
  IterationRecord record;
};

/// One iteration of the dynamic first/second-order Frank-Wolfe method.
SofwStep sofw_step(const ObjectiveOracle& o, const Polytope& P, const Vector& x, const SofwConfig& cfg,
                   long k = 0, Execution exec = Execution::parallel);

/// Iterates until both measures fall below the thresholds or max_iters steps
/// have been taken. The last record always describes the returned point.
IterationTrace run_sofw(const Problem& problem, const SofwConfig& cfg, Execution exec = Execution::parallel);

/// Indices k whose realized decrease f_k - f_{k+1} falls short of
/// max{X_k^2 / (2 L~), 2 psi_k^3 / (3 rho~^2)} by more than 1e-9.
std::vector<long> verify_decrease(const IterationTrace& trace, const SofwConfig& cfg);

struct ComplexityBound {
  double first_order = 0.0;  // 2 L~ (f0 - f_min) / eps_g^2
  double joint = 0.0;        // (f0 - f_min) / min{eps_g^2 / (2 L~), 2 eps_H^3 / (3 rho~^2)}
};

ComplexityBound complexity_bound(const SofwConfig& cfg, double f0, double f_min);

/// #{k : X_k > eps_g} over the stepping records of a trace.
long count_first_order_violations(const IterationTrace& trace, double eps_g);

}  // namespace saddle
