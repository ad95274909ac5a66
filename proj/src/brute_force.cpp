#include <algorithm>
#include <cmath>
#include <random>

#include "saddle_escape/subsolvers.hpp"

namespace saddle {

namespace {

constexpr double kGridBudget = 2e5;
constexpr std::size_t kGridStarts = 6;
constexpr int kRandomStarts = 8;

// Feasible directions C = {d : A d <= r, ||d|| <= 1}, with the gradient row
// appended to A when present.
struct DirectionSet {
  Matrix A;
  Vector r;

  bool inside(const Vector& d, double tol = 1e-12) const {
    if (d.norm() > 1.0 + tol) return false;
    return A.rows() == 0 || (A * d - r).maxCoeff() <= tol;
  }

  Vector project(const Vector& z) const {
    if (inside(z, 0.0)) return z;
    if (A.rows() == 0) return z / z.norm();
    const Index s = A.rows() + 1;
    Matrix inc = Matrix::Zero(z.size(), s);
    Vector y = z, w(z.size());
    for (int it = 0; it < 5000; ++it) {
      double change = 0.0;
      for (Index j = 0; j < s; ++j) {
        w = y + inc.col(j);
        y = w;
        if (j < A.rows()) {
          const double ex = A.row(j).dot(w) - r(j);
          if (ex > 0) y.noalias() -= (ex / A.row(j).squaredNorm()) * A.row(j).transpose();
        } else {
          const double nw = w.norm();
          if (nw > 1.0) y /= nw;
        }
        w -= y;  // new increment
        change += (w - inc.col(j)).squaredNorm();
        inc.col(j) = w;
      }
      if (change < 1e-28) break;
    }
    return y;
  }
};

Vector numeric_gradient(const std::function<double(const Vector&)>& f, const Vector& d) {
  constexpr double h = 1e-6;
  Vector g(d.size());
  Vector p = d, m = d;
  for (Index i = 0; i < d.size(); ++i) {
    p(i) = d(i) + h;
    m(i) = d(i) - h;
    g(i) = (f(p) - f(m)) / (2 * h);
    p(i) = m(i) = d(i);
  }
  return g;
}

Vector polish(const std::function<double(const Vector&)>& f, const DirectionSet& C, Vector d) {
  double fd = f(d);
  double step = 0.5;
  for (int it = 0; it < 400; ++it) {
    const Vector g = numeric_gradient(f, d);
    if (g.norm() < 1e-14) break;
    bool moved = false;
    while (step > 1e-12) {
      const Vector cand = C.project(d - step * g);
      const Vector delta = cand - d;
      const double fc = f(cand);
      if (fc <= fd + g.dot(delta) + delta.squaredNorm() / (2 * step) + 1e-15) {
        moved = delta.norm() > 1e-12;
        d = cand;
        fd = fc;
        step = std::min(10.0, step * 2);
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return d;
}

}  // namespace

BruteForceResult brute_force_direction(const std::function<double(const Vector&)>& objective,
                                       const Polytope& P, const Vector& x,
                                       const std::optional<Vector>& grad_constraint, double resolution) {
  const Index n = P.dim();
  if (n > 4) throw InvalidInput("brute_force_direction: dimension " + std::to_string(n) + " exceeds 4");
  if (!(resolution > 0)) throw InvalidInput("brute_force_direction: resolution must be positive");
  if (x.size() != n) throw DimensionMismatch("brute_force_direction: dimension mismatch");
  if (!contains(P, x, kActivityTol)) throw InfeasiblePoint("brute_force_direction: x is not feasible");

  DirectionSet C;
  const Index extra = grad_constraint ? 1 : 0;
  C.A.resize(P.rows() + extra, n);
  C.r.resize(P.rows() + extra);
  C.A.topRows(P.rows()) = P.normals();
  C.r.head(P.rows()) = residual(P, x).cwiseMax(0.0);
  if (grad_constraint) {
    if (grad_constraint->size() != n) throw DimensionMismatch("brute_force_direction: gradient length");
    C.A.row(P.rows()) = grad_constraint->transpose();
    C.r(P.rows()) = 0.0;
  }

  double h = resolution;
  while (std::pow(2.0 / h + 1.0, static_cast<double>(n)) > kGridBudget) h *= 1.25;
  const long N = static_cast<long>(std::floor(1.0 / h));

  // Keep the kGridStarts best grid points.
  std::vector<std::pair<double, Vector>> top;
  std::vector<long> idx(n, -N);
  Vector d(n);
  while (true) {
    for (Index i = 0; i < n; ++i) d(i) = static_cast<double>(idx[i]) * h;
    if (C.inside(d)) {
      const double v = objective(d);
      if (top.size() < kGridStarts || v < top.back().first) {
        if (top.size() == kGridStarts) top.pop_back();
        auto pos = std::upper_bound(top.begin(), top.end(), v,
                                    [](double a, const auto& b) { return a < b.first; });
        top.insert(pos, {v, d});
      }
    }
    Index k = 0;
    while (k < n && ++idx[k] > N) idx[k++] = -N;
    if (k == n) break;
  }

  std::vector<Vector> starts;
  starts.push_back(Vector::Zero(n));
  for (const auto& t : top) starts.push_back(t.second);
  std::mt19937_64 rng(0x5eedULL + static_cast<unsigned long long>(n));
  std::normal_distribution<double> normal;
  for (int s = 0; s < kRandomStarts; ++s) {
    Vector z(n);
    for (Index i = 0; i < n; ++i) z(i) = normal(rng);
    starts.push_back(C.project(z / std::max(z.norm(), 1e-300)));
  }

  BruteForceResult best{Vector::Zero(n), objective(Vector::Zero(n))};
  for (const Vector& s : starts) {
    const Vector p = polish(objective, C, s);
    if (!C.inside(p, 1e-9)) continue;
    const double v = objective(p);
    if (v < best.value) best = {p, v};
  }
  return best;
}

}  // namespace saddle
