#include "saddle_escape/geometry.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace saddle {

Polytope::Polytope(Matrix A, Vector b, std::vector<std::string> names)
    : A_(std::move(A)), b_(std::move(b)), names_(std::move(names)) {
  if (A_.cols() < 1) throw InvalidInput("polytope dimension must be at least 1");
  if (A_.rows() != b_.size())
    throw DimensionMismatch("polytope: A has " + std::to_string(A_.rows()) +
                            " rows but b has " + std::to_string(b_.size()) + " entries");
  if (!names_.empty() && static_cast<Index>(names_.size()) != A_.rows())
    throw DimensionMismatch("polytope: row label count does not match A");
  for (Index i = 0; i < A_.rows(); ++i) {
    if (A_.row(i).norm() == 0.0)
      throw InvalidInput("polytope: row " + std::to_string(i) + " is the zero vector");
  }
  if (!A_.allFinite() || !b_.allFinite()) throw InvalidInput("polytope: non-finite data");
}

Polytope Polytope::unconstrained(Index n) { return Polytope(Matrix(0, n), Vector(0)); }

std::string ActiveSet::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (Index i : rows) {
    os << (first ? "" : ",") << i;
    first = false;
  }
  if (grad) os << (first ? "" : ",") << "GRAD";
  os << '}';
  return os.str();
}

EqualitySolution solve_equalities(const Matrix& M, const Vector& rhs) {
  const Index n = M.cols();
  EqualitySolution out;
  if (M.rows() == 0) {
    out.particular = Vector::Zero(n);
    out.nullspace = Matrix::Identity(n, n);
    return out;
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(M.cols(), M.rows());
  qr.setThreshold(kRankTol);
  qr.compute(M.transpose());
  const Index r = qr.rank();
  const Matrix Q = qr.householderQ();

  // M^T P = Q R, so the first r rows of P^T M are independent and equal R11^T Q1^T.
  const Vector rhs_perm = qr.colsPermutation().transpose() * rhs;
  Vector y = Vector::Zero(r);
  if (r > 0) {
    y = qr.matrixR()
            .topLeftCorner(r, r)
            .transpose()
            .triangularView<Eigen::Lower>()
            .solve(rhs_perm.head(r));
  }
  out.particular = Q.leftCols(r) * y;
  out.nullspace = Q.rightCols(n - r);
  out.rank = r;

  const double scale = 1.0 + rhs.cwiseAbs().maxCoeff() + M.cwiseAbs().maxCoeff() * out.particular.norm();
  const double defect = (M * out.particular - rhs).cwiseAbs().maxCoeff();
  out.consistent = defect <= 1e-10 * scale;
  return out;
}

Vector residual(const Polytope& P, const Vector& x) {
  if (x.size() != P.dim())
    throw DimensionMismatch("residual: point has dimension " + std::to_string(x.size()) +
                            ", polytope has " + std::to_string(P.dim()));
  return P.bounds() - P.normals() * x;
}

bool contains(const Polytope& P, const Vector& x, double tol) {
  if (tol < 0) throw InvalidInput("contains: negative tolerance");
  const Vector r = residual(P, x);
  return r.size() == 0 || r.minCoeff() >= -tol;
}

ActiveSet active_rows(const Polytope& P, const Vector& x, double tol) {
  const Vector r = residual(P, x);
  ActiveSet S;
  S.tol = tol;
  for (Index i = 0; i < r.size(); ++i)
    if (std::abs(r(i)) <= tol) S.rows.push_back(i);
  return S;
}

Vector project_halfspace(const Vector& a, double b, const Vector& z) {
  if (a.size() != z.size()) throw DimensionMismatch("project_halfspace: dimension mismatch");
  const double nn = a.squaredNorm();
  if (nn == 0.0) throw InvalidInput("project_halfspace: zero normal vector");
  const double excess = a.dot(z) - b;
  if (excess <= 0.0) return z;
  return z - (excess / nn) * a;
}

namespace {

void require_cap(Index m, const char* who) {
  if (m > kEnumerationCap)
    throw EnumerationCapExceeded(std::string(who) + ": " + std::to_string(m) +
                                 " constraints exceed the enumeration cap of " +
                                 std::to_string(kEnumerationCap));
}

std::vector<std::uint32_t> build_order(Index count) {
  std::vector<std::uint32_t> masks(std::size_t{1} << count);
  for (std::uint32_t i = 0; i < masks.size(); ++i) masks[i] = i;
  // Lexicographic order on sorted index lists: compare the lowest differing bit.
  std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    if (a == b) return false;
    const std::uint32_t diff = a ^ b;
    const std::uint32_t low = diff & (~diff + 1);
    return (a & low) != 0;
  });
  return masks;
}

}  // namespace

std::span<const std::uint32_t> subset_order(Index count) {
  static const std::array<std::vector<std::uint32_t>, kEnumerationCap + 2> table = [] {
    std::array<std::vector<std::uint32_t>, kEnumerationCap + 2> t;
    for (Index c = 0; c < static_cast<Index>(t.size()); ++c) t[c] = build_order(c);
    return t;
  }();
  if (count < 0 || count > kEnumerationCap + 1)
    throw EnumerationCapExceeded("subset_order: unsupported row count " + std::to_string(count));
  return table[count];
}

ActiveSet active_set_from_mask(std::uint32_t mask, Index m, bool with_grad) {
  ActiveSet S;
  for (Index i = 0; i < m; ++i)
    if (mask & (std::uint32_t{1} << i)) S.rows.push_back(i);
  S.grad = with_grad && (mask & (std::uint32_t{1} << m));
  return S;
}

Vector project_polytope(const Polytope& P, const Vector& z) {
  const Index m = P.rows();
  if (z.size() != P.dim()) throw DimensionMismatch("project_polytope: dimension mismatch");
  require_cap(m, "project_polytope");
  if (contains(P, z, 0.0)) return z;
  if (m == 1) return project_halfspace(P.normals().row(0).transpose(), P.bounds()(0), z);

  const Vector slack = residual(P, z);
  Vector best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask : subset_order(m)) {
    if (mask == 0) continue;
    const ActiveSet S = active_set_from_mask(mask, m, false);
    Matrix M(S.rows.size(), P.dim());
    Vector rhs(S.rows.size());
    for (std::size_t j = 0; j < S.rows.size(); ++j) {
      M.row(j) = P.normals().row(S.rows[j]);
      rhs(j) = slack(S.rows[j]);
    }
    const EqualitySolution eq = solve_equalities(M, rhs);
    if (!eq.consistent || eq.rank < static_cast<Index>(S.rows.size())) continue;
    const double dist = eq.particular.norm();
    if (dist >= best_dist) continue;
    const Vector y = z + eq.particular;
    if (!contains(P, y, kActivityTol)) continue;
    best = y;
    best_dist = dist;
  }
  if (best.size() == 0) throw EmptyFeasibleSet("project_polytope: no feasible candidate; polytope is empty");
  return best;
}

SliceResult slice(const Polytope& P, const Vector& x, const ActiveSet& S, const Vector* grad) {
  const Index n = P.dim();
  if (x.size() != n) throw DimensionMismatch("slice: dimension mismatch");
  if (S.grad && (grad == nullptr || grad->size() != n))
    throw DimensionMismatch("slice: gradient row requested without a gradient of dimension n");

  const Index k = S.size();
  Matrix M(k, n);
  Vector rhs(k);
  Index row = 0;
  for (Index i : S.rows) {
    M.row(row) = P.normals().row(i);
    rhs(row) = P.bounds()(i) - P.normals().row(i).dot(x);
    ++row;
  }
  if (S.grad) {
    M.row(row) = grad->transpose();
    rhs(row) = 0.0;
  }

  SliceResult out;
  EqualitySolution eq = solve_equalities(M, rhs);
  if (!eq.consistent) {
    out.status = SliceStatus::inconsistent;
    return out;
  }
  const double norm = eq.particular.norm();
  if (norm > 1.0 + 1e-12) {
    out.status = SliceStatus::outside_ball;
    return out;
  }
  out.slice.radius = std::sqrt(std::max(0.0, 1.0 - norm * norm));
  out.slice.d0 = std::move(eq.particular);
  out.slice.basis = std::move(eq.nullspace);
  return out;
}

}  // namespace saddle
