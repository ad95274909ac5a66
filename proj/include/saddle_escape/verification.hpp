#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "saddle_escape/oracles.hpp"
#include "saddle_escape/sofw.hpp"
#include "saddle_escape/subsolvers.hpp"

namespace saddle {

struct CheckResult {
  std::string name;
  long checked = 0;
  long failed = 0;
  double worst = 0.0;      // largest observed error (or violation count for counting checks)
  double tolerance = 0.0;
  std::vector<std::string> failures;  // first few failure descriptions
  bool passed() const { return failed == 0; }
  void record_failure(std::string what);
};

struct DirectionInstance {
  Matrix H;
  Vector g;
  Polytope P;
  Vector x;
};

/// n uniform in 1..n_max, m uniform in 0..m_max, Gaussian data; each row is
/// active at x with probability 0.4.
DirectionInstance random_direction_instance(std::mt19937_64& rng, int n_max = 4, int m_max = 3);

CheckResult check_lmo_equivalence(int instances, std::uint64_t seed, double tol = 1e-3,
                                  Execution exec = Execution::parallel);
CheckResult check_qmo_equivalence(int instances, std::uint64_t seed, double tol = 1e-3,
                                  Execution exec = Execution::parallel);

struct TrsKkt {
  double residual = 0.0;          // ||(Q + lambda I) u + c||
  double multiplier_deficit = 0.0;  // max(0, max(0, -lambda_min) - lambda)
  double complementarity = 0.0;   // |lambda (radius - ||u||)|
  double norm_excess = 0.0;       // max(0, ||u|| - radius)
};
TrsKkt trs_kkt(const Matrix& Q, const Vector& c, double radius, const TrsSolution& s);

/// Random TRS instances of size 1..5 of which `hard_cases` have c orthogonal
/// to the smallest eigenspace with the unconstrained minimum-norm solution
/// strictly inside the ball.
CheckResult check_trs_kkt(int instances, int hard_cases, std::uint64_t seed);

/// Seeded feasible points: uniform in [-box, box]^n projected onto the
/// feasible set.
std::vector<Vector> sample_feasible(const Problem& p, int count, std::uint64_t seed, double box = 2.0);

CheckResult check_fd_gradient(const Problem& p, int points, std::uint64_t seed, double tol = 1e-5);
CheckResult check_fd_hessian(const Problem& p, int points, std::uint64_t seed, double tol = 1e-4);
CheckResult check_constants(const Problem& p, int points, std::uint64_t seed);

/// Nonconvex quadratic on the box [-1, 1]^n (n uniform in 1..n_max) with a
/// random start inside the box and f_min the ball-based lower bound.
Problem random_box_quadratic(std::mt19937_64& rng, int n_max = 4);

struct SofwRunCheck {
  std::string label;
  long iterations = 0;
  long decrease_violations = 0;
  long first_order_count = 0;
  ComplexityBound bound;
  bool converged = false;
  bool feasible = true;
  bool joint_bound_respected() const { return static_cast<double>(iterations) <= bound.joint; }
  bool first_order_bound_respected() const { return static_cast<double>(first_order_count) <= bound.first_order; }
};

/// Runs SOFW on `p` and collects the decrease, feasibility and complexity data.
SofwRunCheck check_sofw_run(const std::string& label, const Problem& p, double eps_g, double eps_H,
                            long max_iters = 1000000, Execution exec = Execution::parallel);

struct VerifyOptions {
  int instances = 500;
  int trs_instances = 500;
  int trs_hard_cases = 40;
  int fd_points = 100;
  std::uint64_t seed = 1;
  std::vector<Problem> problems;  // empty selects the bundled problems
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

VerifyReport run_verification(const VerifyOptions& opts);

/// The problems whose oracles the verifier audits by default.
std::vector<Problem> bundled_problems();

nlohmann::json to_json(const CheckResult& c);
nlohmann::json to_json(const VerifyReport& r);

}  // namespace saddle
