#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "saddle_escape/common.hpp"
#include "saddle_escape/geometry.hpp"

namespace saddle {

/// Minimizer and optimal value of a direction subproblem over
/// {d : x + d in P, ||d|| <= 1} (plus <g, d> <= 0 for the quadratic one).
struct DirectionSolution {
  Vector direction;
  double value = 0.0;
  ActiveSet active;
  bool ball_active = false;
};

/// Exact solution of  min u^T Q u + 2 c^T u  s.t. ||u|| <= radius.
/// `multiplier` is the ball multiplier lambda with (Q + lambda I) u = -c.
struct TrsSolution {
  Vector u;
  double value = 0.0;
  double multiplier = 0.0;
  bool hard_case = false;
};

TrsSolution solve_trs(const Matrix& Q, const Vector& c, double radius);

/// Every point that can be a local minimizer of the trust-region problem: the
/// global solution (both signs of the eigen-component in the hard case) and
/// the roots of the secular equation on the interval that can host the
/// unique local-nonglobal minimizer.
std::vector<Vector> trs_candidates(const Matrix& Q, const Vector& c, double radius);

/// Linear minimization oracle: min <g, s> over x + s in P, ||s|| <= 1.
DirectionSolution solve_lmo(const Vector& g, const Polytope& P, const Vector& x,
                            Execution exec = Execution::parallel);

/// Quadratic minimization oracle: min d^T H d over x + d in P, ||d|| <= 1,
/// <g, d> <= 0. The gradient row is dropped when g is exactly zero.
DirectionSolution solve_qmo(const Matrix& H, const Vector& g, const Polytope& P, const Vector& x,
                            Execution exec = Execution::parallel);

struct BruteForceResult {
  Vector direction;
  double value = 0.0;
};

/// Reference optimizer for n <= 4: scans a grid of the unit ball (spacing at
/// least `resolution`, coarsened to keep the grid near 2e5 points), then
/// polishes the best grid points and seeded random feasible points with
/// projected descent. Projections use Dykstra's alternating scheme, so nothing
/// here shares code with the active-set enumerators.
BruteForceResult brute_force_direction(const std::function<double(const Vector&)>& objective,
                                       const Polytope& P, const Vector& x,
                                       const std::optional<Vector>& grad_constraint,
                                       double resolution = 1e-2);

}  // namespace saddle
