#include "saddle_escape/subsolvers.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "saddle_escape/parallel.hpp"

namespace saddle {

namespace {

constexpr double kTieTol = 1e-12;
constexpr double kZeroDirection = 1e-13;

struct Candidate {
  bool valid = false;
  double value = 0.0;
  Vector direction;
};

void check_inputs(const Vector& g, const Polytope& P, const Vector& x, const char* who) {
  if (x.size() != P.dim() || g.size() != P.dim())
    throw DimensionMismatch(std::string(who) + ": dimension mismatch");
  if (P.rows() > kEnumerationCap)
    throw EnumerationCapExceeded(std::string(who) + ": " + std::to_string(P.rows()) +
                                 " constraints exceed the enumeration cap of " +
                                 std::to_string(kEnumerationCap));
  if (!contains(P, x, kActivityTol)) throw InfeasiblePoint(std::string(who) + ": x is not feasible");
}

bool feasible_direction(const Polytope& P, const Vector& x, const Vector& d) {
  return contains(P, x + d, kActivityTol);
}

// Subsets worth solving: every row must be reachable from x inside the unit
// ball, and more than n equalities are always dependent (their slice equals
// that of a smaller subset already in the list).
std::vector<std::uint32_t> admissible_masks(const Polytope& P, const Vector& x, bool with_grad) {
  const Index m = P.rows();
  const Index count = m + (with_grad ? 1 : 0);
  const Vector slack = residual(P, x);
  std::uint32_t unreachable = 0;
  for (Index i = 0; i < m; ++i)
    if (slack(i) > P.normals().row(i).norm() * (1.0 + 1e-12) + kActivityTol) unreachable |= 1u << i;

  std::vector<std::uint32_t> out;
  for (std::uint32_t mask : subset_order(count)) {
    if (mask & unreachable) continue;
    if (std::popcount(mask) > P.dim()) continue;
    out.push_back(mask);
  }
  return out;
}

template <class Eval>
DirectionSolution enumerate(const Polytope& P, const Vector& x, bool with_grad, Execution exec,
                            const Eval& eval) {
  const Index m = P.rows();
  const std::vector<std::uint32_t> masks = admissible_masks(P, x, with_grad);
  const auto count = static_cast<std::ptrdiff_t>(masks.size());
  std::vector<Candidate> cands(masks.size());

  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 8) num_threads(thread_cap()) if (count >= 64)
    for (std::ptrdiff_t i = 0; i < count; ++i)
      cands[i] = eval(active_set_from_mask(masks[i], m, with_grad));
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i)
      cands[i] = eval(active_set_from_mask(masks[i], m, with_grad));
  }

  // Deterministic reduction: the minimum value, ties (within kTieTol) broken
  // by enumeration order, i.e. smaller cardinality then lexicographic.
  double best_value = std::numeric_limits<double>::infinity();
  for (const Candidate& c : cands)
    if (c.valid) best_value = std::min(best_value, c.value);

  DirectionSolution out;
  std::ptrdiff_t pick = -1;
  if (best_value <= 0.0) {
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      if (cands[i].valid && cands[i].value <= best_value + kTieTol) {
        pick = i;
        break;
      }
    }
  }
  if (pick < 0) {
    // d = 0 is always feasible; reached only when rounding hides it.
    out.direction = Vector::Zero(P.dim());
    out.value = 0.0;
    out.active = active_rows(P, x);
  } else {
    out.direction = std::move(cands[pick].direction);
    out.value = cands[pick].value;
    out.active = active_set_from_mask(masks[pick], m, with_grad);
  }
  out.ball_active = std::abs(out.direction.norm() - 1.0) <= kActivityTol;
  return out;
}

}  // namespace

DirectionSolution solve_lmo(const Vector& g, const Polytope& P, const Vector& x, Execution exec) {
  check_inputs(g, P, x, "solve_lmo");
  const double gscale = std::max(1.0, g.norm());
  return enumerate(P, x, false, exec, [&](const ActiveSet& S) {
    Candidate c;
    const SliceResult r = slice(P, x, S);
    if (r.status != SliceStatus::ok) return c;
    const AffineSlice& sl = r.slice;
    Vector d = sl.d0;
    if (sl.basis.cols() > 0) {
      const Vector zg = sl.basis.transpose() * g;
      const double zn = zg.norm();
      if (zn > kZeroDirection * gscale) d -= (sl.radius / zn) * (sl.basis * zg);
    }
    if (!feasible_direction(P, x, d)) return c;
    c.valid = true;
    c.value = g.dot(d);
    c.direction = std::move(d);
    return c;
  });
}

DirectionSolution solve_qmo(const Matrix& H, const Vector& g, const Polytope& P, const Vector& x,
                            Execution exec) {
  check_inputs(g, P, x, "solve_qmo");
  if (H.rows() != P.dim() || H.cols() != P.dim()) throw DimensionMismatch("solve_qmo: Hessian has the wrong shape");
  const Matrix Hs = 0.5 * (H + H.transpose());
  const bool with_grad = g.norm() > 0.0;
  const double gtol = 1e-9;

  return enumerate(P, x, with_grad, exec, [&](const ActiveSet& S) {
    Candidate best;
    const SliceResult r = slice(P, x, S, with_grad ? &g : nullptr);
    if (r.status != SliceStatus::ok) return best;
    const AffineSlice& sl = r.slice;
    const Matrix& Z = sl.basis;

    std::vector<Vector> us;
    if (Z.cols() == 0) {
      us.emplace_back(0);
    } else {
      const Matrix Qr = Z.transpose() * Hs * Z;
      const Vector cr = Z.transpose() * (Hs * sl.d0);
      us = trs_candidates(Qr, cr, sl.radius);
    }
    for (const Vector& u : us) {
      Vector d = sl.d0;
      if (Z.cols() > 0) d += Z * u;
      if (with_grad && g.dot(d) > gtol) continue;
      if (!feasible_direction(P, x, d)) continue;
      const double v = d.dot(Hs * d);
      if (!best.valid || v < best.value - kTieTol) {
        best.valid = true;
        best.value = v;
        best.direction = std::move(d);
      }
    }
    return best;
  });
}

}  // namespace saddle
