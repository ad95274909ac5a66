#include "saddle_escape/verification.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "saddle_escape/io.hpp"
#include "saddle_escape/parallel.hpp"

namespace saddle {

namespace {

constexpr std::size_t kMaxListedFailures = 8;

Vector gaussian_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = N(rng);
  return v;
}

Matrix symmetric_gaussian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Matrix M(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) M(i, j) = N(rng);
  return 0.5 * (M + M.transpose());
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string describe(const char* what, long index, double expected, double got) {
  std::ostringstream os;
  os << std::setprecision(17) << what << " #" << index << ": expected " << expected << ", got " << got;
  return os.str();
}

template <typename Solve>
CheckResult equivalence_check(const char* name, int instances, std::uint64_t seed, double tol, Execution exec,
                              bool quadratic, Solve solve) {
  std::mt19937_64 rng(seed);
  std::vector<DirectionInstance> cases;
  cases.reserve(static_cast<std::size_t>(instances));
  for (int i = 0; i < instances; ++i) cases.push_back(random_direction_instance(rng));

  std::vector<double> exact(cases.size()), reference(cases.size());
  const long count = static_cast<long>(cases.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_cap()) if (exec == Execution::parallel)
  for (long i = 0; i < count; ++i) {
    const DirectionInstance& c = cases[static_cast<std::size_t>(i)];
    exact[static_cast<std::size_t>(i)] = solve(c);
    std::function<double(const Vector&)> objective;
    if (quadratic) {
      objective = [&c](const Vector& d) { return d.dot(c.H * d); };
      reference[static_cast<std::size_t>(i)] = brute_force_direction(objective, c.P, c.x, c.g).value;
    } else {
      objective = [&c](const Vector& d) { return c.g.dot(d); };
      reference[static_cast<std::size_t>(i)] = brute_force_direction(objective, c.P, c.x, std::nullopt).value;
    }
  }

  CheckResult r;
  r.name = name;
  r.tolerance = tol;
  for (long i = 0; i < count; ++i) {
    const double err = std::abs(exact[static_cast<std::size_t>(i)] - reference[static_cast<std::size_t>(i)]);
    ++r.checked;
    r.worst = std::max(r.worst, err);
    if (!(err <= tol))
      r.record_failure(describe(name, i, reference[static_cast<std::size_t>(i)], exact[static_cast<std::size_t>(i)]));
  }
  return r;
}

}  // namespace

void CheckResult::record_failure(std::string what) {
  ++failed;
  if (failures.size() < kMaxListedFailures) failures.push_back(std::move(what));
}

DirectionInstance random_direction_instance(std::mt19937_64& rng, int n_max, int m_max) {
  const int n = uniform_int(rng, 1, n_max);
  const int m = uniform_int(rng, 0, m_max);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  const Vector x = 0.5 * gaussian_vector(n, rng);
  Matrix A(m, n);
  Vector b(m);
  for (int i = 0; i < m; ++i) {
    A.row(i) = gaussian_vector(n, rng).transpose();
    const double slack = U(rng) < 0.4 ? 0.0 : U(rng);
    b(i) = A.row(i).dot(x) + slack;
  }
  Vector g = gaussian_vector(n, rng);
  if (U(rng) < 0.05) g.setZero();
  Matrix H = symmetric_gaussian(n, rng);
  return DirectionInstance{std::move(H), std::move(g), Polytope(std::move(A), std::move(b)), x};
}

CheckResult check_lmo_equivalence(int instances, std::uint64_t seed, double tol, Execution exec) {
  return equivalence_check("lmo_vs_brute_force", instances, seed, tol, exec, false,
                           [](const DirectionInstance& c) { return solve_lmo(c.g, c.P, c.x, Execution::serial).value; });
}

CheckResult check_qmo_equivalence(int instances, std::uint64_t seed, double tol, Execution exec) {
  return equivalence_check(
      "qmo_vs_brute_force", instances, seed ^ 0x9e3779b97f4a7c15ULL, tol, exec, true,
      [](const DirectionInstance& c) { return solve_qmo(c.H, c.g, c.P, c.x, Execution::serial).value; });
}

TrsKkt trs_kkt(const Matrix& Q, const Vector& c, double radius, const TrsSolution& s) {
  TrsKkt k;
  const Index n = Q.rows();
  k.residual = ((Q + s.multiplier * Matrix::Identity(n, n)) * s.u + c).norm();
  const double lam_min = n == 0 ? 0.0 : Eigen::SelfAdjointEigenSolver<Matrix>(Q, Eigen::EigenvaluesOnly).eigenvalues()(0);
  k.multiplier_deficit = std::max(0.0, std::max(0.0, -lam_min) - s.multiplier);
  k.complementarity = std::abs(s.multiplier * (radius - s.u.norm()));
  k.norm_excess = std::max(0.0, s.u.norm() - radius);
  return k;
}

CheckResult check_trs_kkt(int instances, int hard_cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  CheckResult r;
  r.name = "trs_kkt";
  r.tolerance = 1e-7;
  long hard_built = 0;
  for (int i = 0; i < instances; ++i) {
    const int n = uniform_int(rng, 1, 5);
    const double radius = 0.1 + 1.9 * U(rng);
    Matrix Q;
    Vector c;
    const bool hard = i < hard_cases;
    if (hard) {
      // Q = V diag(lam) V^T with a (possibly repeated) smallest eigenvalue
      // lam_1 < 0 and c = (Q - lam_1 I) w for w orthogonal to its eigenspace,
      // ||w|| < radius.
      Matrix G(n, n);
      for (Index j = 0; j < n; ++j) G.col(j) = gaussian_vector(n, rng);
      Eigen::HouseholderQR<Matrix> qr(G);
      const Matrix V = qr.householderQ();
      Vector lam = gaussian_vector(n, rng).cwiseAbs();
      const int mult = n == 1 ? 1 : uniform_int(rng, 1, std::max(1, n / 2));
      const double lam1 = -(0.1 + U(rng));
      lam.head(mult).setConstant(lam1);
      for (Index j = mult; j < n; ++j) lam(j) = lam1 + 0.2 + lam(j);
      Q = V * lam.asDiagonal() * V.transpose();
      Q = 0.5 * (Q + Q.transpose());
      Vector w = Vector::Zero(n);
      for (Index j = mult; j < n; ++j) w += V.col(j) * (U(rng) - 0.5);
      if (w.norm() > 0) w *= (0.2 + 0.6 * U(rng)) * radius / w.norm();
      c = (Q - lam1 * Matrix::Identity(n, n)) * w;
      ++hard_built;
    } else {
      Q = symmetric_gaussian(n, rng);
      c = gaussian_vector(n, rng);
    }
    const TrsSolution s = solve_trs(Q, c, radius);
    const TrsKkt k = trs_kkt(Q, c, radius, s);
    r.worst = std::max(r.worst, std::max(k.residual, k.complementarity));
    ++r.checked;
    if (k.residual > 1e-7 || k.multiplier_deficit > 1e-9 || k.complementarity > 1e-7 || k.norm_excess > 1e-9) {
      std::ostringstream os;
      os << std::setprecision(6) << "trs #" << i << (hard ? " (hard)" : "") << ": residual " << k.residual
         << ", multiplier deficit " << k.multiplier_deficit << ", complementarity " << k.complementarity
         << ", norm excess " << k.norm_excess;
      r.record_failure(os.str());
    }
  }
  if (hard_built < hard_cases) r.record_failure("fewer hard cases than requested");
  return r;
}

std::vector<Vector> sample_feasible(const Problem& p, int count, std::uint64_t seed, double box) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-box, box);
  const Index n = p.oracle.dim();
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vector z(n);
    for (Index j = 0; j < n; ++j) z(j) = U(rng);
    out.push_back(project_polytope(p.feasible_set, z));
  }
  return out;
}

CheckResult check_fd_gradient(const Problem& p, int points, std::uint64_t seed, double tol) {
  CheckResult r;
  r.name = "fd_gradient:" + p.kind;
  r.tolerance = tol;
  const std::vector<Vector> xs = sample_feasible(p, points, seed);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double err = fd_check_gradient(p.oracle, xs[i]);
    ++r.checked;
    r.worst = std::max(r.worst, err);
    if (!(err <= tol)) r.record_failure(describe("fd gradient error at sample", static_cast<long>(i), tol, err));
  }
  return r;
}

CheckResult check_fd_hessian(const Problem& p, int points, std::uint64_t seed, double tol) {
  CheckResult r;
  r.name = "fd_hessian:" + p.kind;
  r.tolerance = tol;
  const std::vector<Vector> xs = sample_feasible(p, points, seed);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double err = fd_check_hessian(p.oracle, xs[i]);
    ++r.checked;
    r.worst = std::max(r.worst, err);
    if (!(err <= tol)) r.record_failure(describe("fd hessian error at sample", static_cast<long>(i), tol, err));
  }
  return r;
}

CheckResult check_constants(const Problem& p, int points, std::uint64_t seed) {
  CheckResult r;
  r.name = "constants:" + p.kind;
  const std::vector<Vector> xs = sample_feasible(p, points, seed, 1.5);
  // Three pointwise audits and two pairwise Lipschitz audits per sample, plus the f_min check.
  r.checked = xs.empty() ? 0 : static_cast<long>(4 * xs.size() + 2 * (xs.size() - 1));
  for (std::string& v : audit_constants(p.oracle, xs)) r.record_failure(std::move(v));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = p.oracle.value(xs[i]);
    if (f < p.f_min) r.record_failure(describe("f below f_min at sample", static_cast<long>(i), p.f_min, f));
  }
  r.worst = static_cast<double>(r.failed);
  return r;
}

Problem random_box_quadratic(std::mt19937_64& rng, int n_max) {
  const int n = uniform_int(rng, 1, n_max);
  const Matrix Q = symmetric_gaussian(n, rng);
  const Vector c = gaussian_vector(n, rng);
  Matrix A(2 * n, n);
  A << Matrix::Identity(n, n), -Matrix::Identity(n, n);
  const Vector b = Vector::Ones(2 * n);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Vector x0(n);
  for (int i = 0; i < n; ++i) x0(i) = U(rng);

  const double R = std::sqrt(static_cast<double>(n));
  ObjectiveOracle o = quadratic_oracle(Q, c, R);
  const double f_min = -0.5 * o.constants().H_max * R * R - c.norm() * R;
  return Problem{"quadratic", std::move(o), Polytope(A, b), x0, f_min};
}

SofwRunCheck check_sofw_run(const std::string& label, const Problem& p, double eps_g, double eps_H, long max_iters,
                            Execution exec) {
  const SofwConfig cfg = SofwConfig::from_constants(p.oracle.constants(), eps_g, eps_H, max_iters);
  const IterationTrace trace = run_sofw(p, cfg, exec);
  SofwRunCheck c;
  c.label = label;
  c.iterations = trace.steps();
  c.decrease_violations = static_cast<long>(verify_decrease(trace, cfg).size());
  c.first_order_count = count_first_order_violations(trace, eps_g);
  c.bound = complexity_bound(cfg, p.oracle.value(p.x0), p.f_min);
  c.converged = trace.status == RunStatus::converged;
  for (const IterationRecord& rec : trace.records)
    if (!contains(p.feasible_set, rec.x, kActivityTol)) c.feasible = false;
  return c;
}

std::vector<Problem> bundled_problems() {
  Matrix Q(2, 2);
  Q << 0.5, -1.0, -1.0, 0.5;
  return {counterexample_problem(), quad1d_problem(), copositivity_problem(Q, 1.0)};
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

VerifyReport run_verification(const VerifyOptions& opts) {
  VerifyReport report;
  const std::vector<Problem> problems = opts.problems.empty() ? bundled_problems() : opts.problems;
  std::uint64_t s = opts.seed;
  for (const Problem& p : problems) {
    report.checks.push_back(check_fd_gradient(p, opts.fd_points, s));
    report.checks.push_back(check_fd_hessian(p, opts.fd_points, s + 1));
    report.checks.push_back(check_constants(p, 200, s + 2));
    s += 3;
  }
  report.checks.push_back(check_lmo_equivalence(opts.instances, opts.seed));
  report.checks.push_back(check_qmo_equivalence(opts.instances, opts.seed));
  report.checks.push_back(check_trs_kkt(opts.trs_instances, opts.trs_hard_cases, opts.seed));
  return report;
}

nlohmann::json to_json(const CheckResult& c) {
  return nlohmann::json{{"name", c.name},         {"checked", c.checked},   {"failed", c.failed},
                        {"worst", c.worst},       {"tolerance", c.tolerance}, {"passed", c.passed()},
                        {"failures", c.failures}};
}

nlohmann::json to_json(const VerifyReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckResult& c : r.checks) checks.push_back(to_json(c));
  return nlohmann::json{{"passed", r.passed()}, {"checks", checks}};
}

}  // namespace saddle
