#include "saddle_escape/stationarity.hpp"

namespace saddle {

namespace {

void require_feasible(const Polytope& P, const Vector& x, const char* who) {
  if (x.size() != P.dim()) throw DimensionMismatch(std::string(who) + ": dimension mismatch");
  if (!contains(P, x, kActivityTol)) throw InfeasiblePoint(std::string(who) + ": x is not feasible");
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::sosp: return "SOSP";
    case Verdict::fosp: return "FOSP";
    case Verdict::neither: break;
  }
  return "neither";
}

double first_order_measure(const ObjectiveOracle& o, const Polytope& P, const Vector& x, Execution exec) {
  require_feasible(P, x, "first_order_measure");
  return 0.0 - solve_lmo(o.gradient(x), P, x, exec).value;
}

double second_order_measure(const ObjectiveOracle& o, const Polytope& P, const Vector& x, Execution exec) {
  require_feasible(P, x, "second_order_measure");
  return 0.0 - solve_qmo(o.hessian(x), o.gradient(x), P, x, exec).value;
}

StationarityReport classify(const ObjectiveOracle& o, const Polytope& P, const Vector& x, double eps_g,
                            double eps_H, Execution exec) {
  if (!(eps_g > 0) || !(eps_H > 0)) throw InvalidInput("classify: tolerances must be positive");
  require_feasible(P, x, "classify");
  const Vector g = o.gradient(x);
  const DirectionSolution lmo = solve_lmo(g, P, x, exec);
  const DirectionSolution qmo = solve_qmo(o.hessian(x), g, P, x, exec);

  StationarityReport r;
  r.first_order = 0.0 - lmo.value;
  r.second_order = 0.0 - qmo.value;
  r.s_hat = lmo.direction;
  r.d_hat = qmo.direction;
  r.eps_g = eps_g;
  r.eps_H = eps_H;
  if (r.first_order <= eps_g) r.verdict = r.second_order <= eps_H ? Verdict::sosp : Verdict::fosp;
  return r;
}

}  // namespace saddle
