#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "saddle_escape/common.hpp"

namespace saddle {

/// Feasible region {x : A x <= b}. Rows are the outward normals a_i.
class Polytope {
 public:
  Polytope(Matrix A, Vector b, std::vector<std::string> names = {});

  /// R^n with no constraints (m = 0).
  static Polytope unconstrained(Index n);

  Index rows() const { return A_.rows(); }
  Index dim() const { return A_.cols(); }
  const Matrix& normals() const { return A_; }
  const Vector& bounds() const { return b_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  Matrix A_;
  Vector b_;
  std::vector<std::string> names_;
};

/// Sorted, duplicate-free set of rows held at equality. `grad` marks the
/// extra row <g, d> = 0 used by the second-order subproblem.
struct ActiveSet {
  std::vector<Index> rows;
  bool grad = false;
  double tol = kActivityTol;

  Index size() const { return static_cast<Index>(rows.size()) + (grad ? 1 : 0); }
  std::string to_string() const;
  bool operator==(const ActiveSet& other) const {
    return rows == other.rows && grad == other.grad;
  }
};

/// The affine set {d0 + Z u} intersected with the ball ||d|| <= 1, where the
/// residual ball in u-coordinates has the given radius.
struct AffineSlice {
  Vector d0;
  Matrix basis;
  double radius = 0.0;
};

enum class SliceStatus { ok, inconsistent, outside_ball };

struct SliceResult {
  SliceStatus status = SliceStatus::ok;
  AffineSlice slice;
};

/// Min-norm solution and orthonormal nullspace of M d = rhs. Dependent rows
/// are dropped by a column-pivoted QR of M^T.
struct EqualitySolution {
  Vector particular;
  Matrix nullspace;
  Index rank = 0;
  bool consistent = true;
};

EqualitySolution solve_equalities(const Matrix& M, const Vector& rhs);

/// Slacks b - A x.
Vector residual(const Polytope& P, const Vector& x);

bool contains(const Polytope& P, const Vector& x, double tol = kActivityTol);

/// Rows whose slack at x is at most tol.
ActiveSet active_rows(const Polytope& P, const Vector& x, double tol = kActivityTol);

Vector project_halfspace(const Vector& a, double b, const Vector& z);

/// Exact Euclidean projection by active-subset enumeration (m <= 12).
Vector project_polytope(const Polytope& P, const Vector& z);

/// Parametrizes {d : A_S d = b_S - A_S x, and g^T d = 0 when S.grad} inside
/// the unit ball.
SliceResult slice(const Polytope& P, const Vector& x, const ActiveSet& S,
                  const Vector* grad = nullptr);

/// Bitmasks over `count` rows ordered by cardinality, then lexicographically
/// by their sorted index lists. Bit i is row i. count <= kEnumerationCap + 1.
std::span<const std::uint32_t> subset_order(Index count);

/// Expands a mask over m polytope rows (plus bit m for the gradient row when
/// with_grad) into an ActiveSet.
ActiveSet active_set_from_mask(std::uint32_t mask, Index m, bool with_grad);

}  // namespace saddle
