#include "saddle_escape/oracles.hpp"

#include <cmath>
#include <sstream>

namespace saddle {

namespace {

double sym_norm2(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  const Matrix S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

ObjectiveOracle::ObjectiveOracle(std::string name, Index dim, ValueFn value, GradientFn gradient,
                                 HessianFn hessian, SmoothnessConstants constants)
    : name_(std::move(name)),
      dim_(dim),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      constants_(constants) {
  if (dim_ < 1) throw InvalidInput("oracle dimension must be at least 1");
}

void ObjectiveOracle::check_dim(const Vector& x) const {
  if (x.size() != dim_)
    throw DimensionMismatch(name_ + ": expected a point of dimension " + std::to_string(dim_) +
                            ", got " + std::to_string(x.size()));
}

double ObjectiveOracle::value(const Vector& x) const {
  check_dim(x);
  return value_(x);
}

Vector ObjectiveOracle::gradient(const Vector& x) const {
  check_dim(x);
  return gradient_(x);
}

Matrix ObjectiveOracle::hessian(const Vector& x) const {
  check_dim(x);
  return hessian_(x);
}

ObjectiveOracle ObjectiveOracle::with_constants(SmoothnessConstants constants) const {
  ObjectiveOracle copy = *this;
  copy.constants_ = constants;
  return copy;
}

SmoothnessConstants counterexample_constants() {
  // Sampled suprema on [-3, 3]^2: ||hess|| 1.8370, ||grad|| 3.0009, third
  // derivative operator norm 3.1508. Doubled and rounded up.
  return {.L = 3.7, .rho = 6.4, .g_max = 6.1, .H_max = 3.7};
}

ObjectiveOracle counterexample_oracle() {
  auto value = [](const Vector& v) {
    const double x = v(0), y = v(1);
    return -x * y * std::exp(-x * x - y * y) + 0.5 * y * y;
  };
  auto gradient = [](const Vector& v) {
    const double x = v(0), y = v(1);
    const double e = std::exp(-x * x - y * y);
    Vector g(2);
    g << -(1 - 2 * x * x) * y * e, -(1 - 2 * y * y) * x * e + y;
    return g;
  };
  auto hessian = [](const Vector& v) {
    const double x = v(0), y = v(1);
    const double e = std::exp(-x * x - y * y);
    const double off = -(1 - 2 * x * x) * (1 - 2 * y * y) * e;
    Matrix H(2, 2);
    H << 2 * x * y * (3 - 2 * x * x) * e, off, off, 2 * x * y * (3 - 2 * y * y) * e + 1;
    return H;
  };
  return ObjectiveOracle("counterexample", 2, value, gradient, hessian, counterexample_constants());
}

ObjectiveOracle quadratic_oracle(const Matrix& Q, const Vector& c, double region_radius) {
  if (Q.rows() != Q.cols()) throw DimensionMismatch("quadratic_oracle: Q must be square");
  if (c.size() != Q.rows()) throw DimensionMismatch("quadratic_oracle: c has the wrong length");
  if (!Q.allFinite() || !c.allFinite()) throw InvalidInput("quadratic_oracle: non-finite data");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + Q.cwiseAbs().maxCoeff()))
    throw InvalidInput("quadratic_oracle: Q is not symmetric");
  if (!(region_radius >= 0)) throw InvalidInput("quadratic_oracle: negative region radius");

  const Matrix Qs = 0.5 * (Q + Q.transpose());
  const double qn = sym_norm2(Qs);
  SmoothnessConstants k{.L = qn, .rho = 0.0, .g_max = qn * region_radius + c.norm(), .H_max = qn};
  auto value = [Qs, c](const Vector& x) { return 0.5 * x.dot(Qs * x) + c.dot(x); };
  auto gradient = [Qs, c](const Vector& x) -> Vector { return Qs * x + c; };
  auto hessian = [Qs](const Vector&) -> Matrix { return Qs; };
  return ObjectiveOracle("quadratic", Q.rows(), value, gradient, hessian, k);
}

double fd_check_gradient(const ObjectiveOracle& o, const Vector& x, double h) {
  if (!(h > 0)) throw InvalidInput("fd_check_gradient: step must be positive");
  const Vector g = o.gradient(x);
  double worst = 0.0;
  Vector xp = x, xm = x;
  for (Index i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    const double fd = (o.value(xp) - o.value(xm)) / (2 * h);
    xp(i) = xm(i) = x(i);
    worst = std::max(worst, std::abs(fd - g(i)) / std::max(1.0, std::abs(g(i))));
  }
  return worst;
}

double fd_check_hessian(const ObjectiveOracle& o, const Vector& x, double h) {
  if (!(h > 0)) throw InvalidInput("fd_check_hessian: step must be positive");
  const Matrix H = o.hessian(x);
  double worst = 0.0;
  Vector xp = x, xm = x;
  for (Index j = 0; j < x.size(); ++j) {
    xp(j) = x(j) + h;
    xm(j) = x(j) - h;
    const Vector col = (o.gradient(xp) - o.gradient(xm)) / (2 * h);
    xp(j) = xm(j) = x(j);
    for (Index i = 0; i < x.size(); ++i)
      worst = std::max(worst, std::abs(col(i) - H(i, j)) / std::max(1.0, std::abs(H(i, j))));
  }
  return worst;
}

std::vector<std::string> audit_constants(const ObjectiveOracle& o, std::span<const Vector> points) {
  const SmoothnessConstants& k = o.constants();
  constexpr double slack = 1.0 + 1e-6;
  std::vector<std::string> out;
  auto report = [&](const std::string& what, std::size_t i) {
    std::ostringstream os;
    os << o.name() << ": " << what << " at sample " << i;
    out.push_back(os.str());
  };

  std::vector<Vector> grads;
  std::vector<Matrix> hess;
  grads.reserve(points.size());
  hess.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    grads.push_back(o.gradient(points[i]));
    hess.push_back(o.hessian(points[i]));
    const Matrix& H = hess.back();
    if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-10) report("asymmetric Hessian", i);
    if (grads.back().norm() > k.g_max * slack) report("gradient norm exceeds g_max", i);
    if (sym_norm2(H) > k.H_max * slack) report("Hessian norm exceeds H_max", i);
  }
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const std::size_t j = i + 1;
    const double dist = (points[i] - points[j]).norm();
    if (dist == 0.0) continue;
    if ((grads[i] - grads[j]).norm() > k.L * dist * slack) report("gradient Lipschitz bound L violated", i);
    if (sym_norm2(hess[i] - hess[j]) > k.rho * dist * slack) report("Hessian Lipschitz bound rho violated", i);
  }
  return out;
}

void validate(const Problem& problem) {
  if (problem.feasible_set.dim() != problem.oracle.dim())
    throw DimensionMismatch("problem: feasible set and oracle dimensions differ");
  if (problem.x0.size() != problem.oracle.dim())
    throw DimensionMismatch("problem: x0 has the wrong dimension");
  if (!contains(problem.feasible_set, problem.x0, kActivityTol))
    throw InfeasiblePoint("problem: x0 is not feasible");
}

Problem counterexample_problem() {
  Matrix A(1, 2);
  A << 1, 1;
  Vector b = Vector::Zero(1);
  Vector x0(2);
  x0 << 0.5, -0.5;
  return Problem{"counterexample", counterexample_oracle(), Polytope(A, b, {"x+y<=0"}), x0,
                 kCounterexampleFmin};
}

Problem quad1d_problem() {
  Matrix Q(1, 1);
  Q << 2.0;
  Matrix A(2, 1);
  A << 1, -1;
  Vector b(2);
  b << 1, 1;
  Vector x0(1);
  x0 << 0.5;
  return Problem{"quadratic", quadratic_oracle(Q, Vector::Zero(1), 1.0), Polytope(A, b), x0, 0.0};
}

Problem copositivity_problem(const Matrix& Q, double upper) {
  const Index n = Q.rows();
  if (!(upper > 0)) throw InvalidInput("copositivity_problem: an upper bound is required for a finite f_min");
  Matrix A(2 * n, n);
  A << -Matrix::Identity(n, n), Matrix::Identity(n, n);
  Vector b(2 * n);
  b << Vector::Zero(n), Vector::Constant(n, upper);
  const double radius = upper * std::sqrt(static_cast<double>(n));
  ObjectiveOracle oracle = quadratic_oracle(Q, Vector::Zero(n), radius);
  const double f_min = -0.5 * oracle.constants().H_max * radius * radius;
  return Problem{"copositivity", oracle, Polytope(A, b), Vector::Zero(n), f_min};
}

}  // namespace saddle
