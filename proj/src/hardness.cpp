#include "saddle_escape/hardness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "saddle_escape/geometry.hpp"
#include "saddle_escape/parallel.hpp"
#include "saddle_escape/subsolvers.hpp"

namespace saddle {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n), nbr_(n > 0 ? n : 0, 0) {
  if (n < 1) throw InvalidInput("graph: vertex count must be at least 1");
  if (n > 32) throw InvalidInput("graph: at most 32 vertices are supported");
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw InvalidInput("graph: edge (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
    if (i == j) throw InvalidInput("graph: self-loop at vertex " + std::to_string(i));
    if (i > j) std::swap(i, j);
    edges_.emplace_back(i, j);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (auto [i, j] : edges_) {
    nbr_[i] |= 1u << j;
    nbr_[j] |= 1u << i;
  }
}

Graph Graph::from_mask(int n, std::uint64_t mask) {
  std::vector<std::pair<int, int>> e;
  int bit = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++bit)
      if (mask & (std::uint64_t{1} << bit)) e.emplace_back(i, j);
  return Graph(n, std::move(e));
}

Graph Graph::random(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) e.emplace_back(i, j);
  return Graph(n, std::move(e));
}

bool Graph::adjacent(int i, int j) const { return (nbr_.at(i) >> j) & 1u; }

Matrix Graph::adjacency() const {
  Matrix A = Matrix::Zero(n_, n_);
  for (auto [i, j] : edges_) A(i, j) = A(j, i) = 1.0;
  return A;
}

CopositivityInstance build_instance(const Graph& G, int t) {
  const int n = G.size();
  if (t < 1 || t > n) throw InvalidInput("build_instance: t must lie in [1, " + std::to_string(n) + "]");
  CopositivityInstance inst;
  inst.t = t;
  inst.Q = (Matrix::Identity(n, n) + G.adjacency()) * (t - 0.5) - Matrix::Ones(n, n);
  inst.delta = 1.0 / (2.0 * n + 1.0);
  inst.threshold = -inst.delta / std::sqrt(static_cast<double>(n));
  return inst;
}

bool has_stable_set(const Graph& G, int t) {
  const int n = G.size();
  if (n > 20) throw InvalidInput("has_stable_set: exhaustive search limited to 20 vertices");
  if (t <= 0) return true;
  if (t > n) return false;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (std::popcount(s) != t) continue;
    bool stable = true;
    for (int i = 0; i < n && stable; ++i)
      if ((s >> i) & 1u)
        for (int j = i + 1; j < n; ++j)
          if (((s >> j) & 1u) && G.adjacent(i, j)) {
            stable = false;
            break;
          }
    if (stable) return true;
  }
  return false;
}

double min_orthant_ball(const Matrix& Q, Execution exec) {
  const Index n = Q.rows();
  if (Q.cols() != n) throw DimensionMismatch("min_orthant_ball: Q must be square");
  const Polytope orthant(-Matrix::Identity(n, n), Vector::Zero(n));
  return solve_qmo(Q, Vector::Zero(n), orthant, Vector::Zero(n), exec).value;
}

double min_orthant_ball_support(const Matrix& Q) {
  const Index n = Q.rows();
  if (Q.cols() != n) throw DimensionMismatch("min_orthant_ball_support: Q must be square");
  if (n > 16) throw InvalidInput("min_orthant_ball_support: limited to 16 coordinates");
  double best = 0.0;
  for (std::uint32_t T = 1; T < (1u << n); ++T) {
    std::vector<Index> idx;
    for (Index i = 0; i < n; ++i)
      if ((T >> i) & 1u) idx.push_back(i);
    const Index k = static_cast<Index>(idx.size());
    Matrix QT(k, k);
    for (Index a = 0; a < k; ++a)
      for (Index b = 0; b < k; ++b) QT(a, b) = Q(idx[a], idx[b]);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (QT + QT.transpose()));
    for (Index j = 0; j < k; ++j) {
      const double lam = es.eigenvalues()(j);
      if (lam >= best) continue;
      const Vector v = es.eigenvectors().col(j);
      const bool pos = (v.array() >= -1e-9).all();
      const bool neg = (v.array() <= 1e-9).all();
      if (pos || neg) best = lam;
    }
  }
  return best;
}

CorrespondenceReport check_correspondence(const Graph& G, int t, Execution exec) {
  const CopositivityInstance inst = build_instance(G, t);
  CorrespondenceReport r;
  r.n = G.size();
  r.t = t;
  r.min_value = min_orthant_ball(inst.Q, exec);
  r.threshold = inst.threshold;
  r.stable_exists = has_stable_set(G, t);
  r.equivalence_holds = (r.min_value <= r.threshold) == r.stable_exists;
  r.dichotomy_holds = r.min_value >= -1e-9 || r.min_value <= r.threshold + 1e-9;
  return r;
}

namespace {

struct Job {
  Graph graph;
  int t;
};

std::vector<CorrespondenceReport> run_jobs(const std::vector<Job>& jobs, Execution exec) {
  std::vector<CorrespondenceReport> out(jobs.size());
  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_cap())
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = check_correspondence(jobs[i].graph, jobs[i].t, Execution::serial);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = check_correspondence(jobs[i].graph, jobs[i].t, Execution::serial);
  }
  return out;
}

}  // namespace

std::vector<CorrespondenceReport> sweep_exhaustive(int n_max, Execution exec) {
  if (n_max < 1 || n_max > 6) throw InvalidInput("sweep_exhaustive: n_max must lie in [1, 6]");
  std::vector<Job> jobs;
  for (int n = 1; n <= n_max; ++n) {
    const int pairs = n * (n - 1) / 2;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
      const Graph g = Graph::from_mask(n, mask);
      for (int t = 1; t <= n; ++t) jobs.push_back({g, t});
    }
  }
  return run_jobs(jobs, exec);
}

std::vector<CorrespondenceReport> sweep_random(int count, int n_min, int n_max, std::uint64_t seed,
                                               Execution exec) {
  if (count < 0 || n_min < 1 || n_max < n_min || n_max > kEnumerationCap)
    throw InvalidInput("sweep_random: need 1 <= n_min <= n_max <= 12 and count >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_n(n_min, n_max);
  std::vector<Job> jobs;
  for (int i = 0; i < count; ++i) {
    const int n = pick_n(rng);
    const Graph g = Graph::random(n, 0.5, rng);
    for (int t = 1; t <= n; ++t) jobs.push_back({g, t});
  }
  return run_jobs(jobs, exec);
}

}  // namespace saddle
