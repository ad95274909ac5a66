#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "saddle_escape/common.hpp"
#include "saddle_escape/geometry.hpp"

namespace saddle {

/// Global smoothness constants on the feasible set: gradient Lipschitz L,
/// Hessian Lipschitz rho, and norm bounds on the gradient and Hessian.
struct SmoothnessConstants {
  double L = 0.0;
  double rho = 0.0;
  double g_max = 0.0;
  double H_max = 0.0;
};

class ObjectiveOracle {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;
  using HessianFn = std::function<Matrix(const Vector&)>;

  ObjectiveOracle(std::string name, Index dim, ValueFn value, GradientFn gradient,
                  HessianFn hessian, SmoothnessConstants constants);

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  Matrix hessian(const Vector& x) const;

  const std::string& name() const { return name_; }
  Index dim() const { return dim_; }
  const SmoothnessConstants& constants() const { return constants_; }

  ObjectiveOracle with_constants(SmoothnessConstants constants) const;

 private:
  void check_dim(const Vector& x) const;

  std::string name_;
  Index dim_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
  SmoothnessConstants constants_;
};

/// f(x, y) = -x y exp(-x^2 - y^2) + y^2 / 2, the strict-saddle example.
ObjectiveOracle counterexample_oracle();

/// Constants for the counterexample, frozen from a dense sample on [-3, 3]^2
/// times a safety factor of 2.
SmoothnessConstants counterexample_constants();

/// Lower bound used for the counterexample: sampled minimum minus 0.1.
inline constexpr double kCounterexampleFmin = -0.18;

/// f(x) = 1/2 x^T Q x + c^T x. L = H_max = ||Q||_2, rho = 0 and
/// g_max = ||Q||_2 * region_radius + ||c|| for iterates with ||x|| <= region_radius.
ObjectiveOracle quadratic_oracle(const Matrix& Q, const Vector& c, double region_radius);

/// Worst componentwise error of the central-difference gradient, relative to
/// max(1, |analytic component|).
double fd_check_gradient(const ObjectiveOracle& o, const Vector& x, double h = 1e-5);

/// Same for the Hessian, differencing the analytic gradient.
double fd_check_hessian(const ObjectiveOracle& o, const Vector& x, double h = 1e-5);

/// Checks the stated constants against sampled points: pairwise Lipschitz
/// ratios for gradient and Hessian and pointwise norm bounds, each with
/// relative slack 1e-6, plus Hessian symmetry. Returns human-readable violations.
std::vector<std::string> audit_constants(const ObjectiveOracle& o, std::span<const Vector> points);

struct Problem {
  std::string kind;
  ObjectiveOracle oracle;
  Polytope feasible_set;
  Vector x0;
  double f_min = 0.0;
};

/// Throws InvalidInput unless x0 is feasible and dimensions agree.
void validate(const Problem& problem);

/// The counterexample on the halfspace x + y <= 0, started at (0.5, -0.5).
Problem counterexample_problem();

/// f(x) = x^2 on [-1, 1] started at x = 0.5.
Problem quad1d_problem();

/// 1/2 x^T Q x over the orthant, optionally intersected with x <= upper
/// (upper <= 0 means no upper bound). Starts at the origin.
Problem copositivity_problem(const Matrix& Q, double upper);

}  // namespace saddle
