#pragma once

#include <string_view>

#include "saddle_escape/oracles.hpp"
#include "saddle_escape/subsolvers.hpp"

namespace saddle {

enum class Verdict { neither, fosp, sosp };

std::string_view to_string(Verdict v);

struct StationarityReport {
  double first_order = 0.0;   // X(x)
  double second_order = 0.0;  // psi(x)
  Vector s_hat;
  Vector d_hat;
  double eps_g = 0.0;
  double eps_H = 0.0;
  Verdict verdict = Verdict::neither;
};

/// X(x) = -min <grad f(x), s> over feasible unit steps.
double first_order_measure(const ObjectiveOracle& o, const Polytope& P, const Vector& x,
                           Execution exec = Execution::parallel);

/// psi(x) = -min d^T hess f(x) d over feasible unit steps with <grad f(x), d> <= 0.
double second_order_measure(const ObjectiveOracle& o, const Polytope& P, const Vector& x,
                            Execution exec = Execution::parallel);

/// FOSP iff X <= eps_g; SOSP iff additionally psi <= eps_H.
StationarityReport classify(const ObjectiveOracle& o, const Polytope& P, const Vector& x, double eps_g,
                            double eps_H, Execution exec = Execution::parallel);

}  // namespace saddle
