#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "saddle_escape/common.hpp"

namespace saddle {

class Graph {
 public:
  Graph(int n, std::vector<std::pair<int, int>> edges);

  /// Graph on n vertices whose edges are the set bits of `mask` over the
  /// pairs (0,1), (0,2), ..., (n-2,n-1) in that order.
  static Graph from_mask(int n, std::uint64_t mask);

  /// Erdos-Renyi graph with edge probability p.
  static Graph random(int n, double p, std::mt19937_64& rng);

  int size() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool adjacent(int i, int j) const;
  Matrix adjacency() const;

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;  // normalized i < j, sorted, unique
  std::vector<std::uint32_t> nbr_;          // neighbour bitsets
};

struct CopositivityInstance {
  Matrix Q;                // (I + A_G)(t - 1/2) - J
  int t = 0;
  double delta = 0.0;      // 1 / (2n + 1)
  double threshold = 0.0;  // -delta / sqrt(n)
};

CopositivityInstance build_instance(const Graph& G, int t);

/// Exhaustive search for an independent set of size t (n <= 20).
bool has_stable_set(const Graph& G, int t);

/// min x^T Q x over x >= 0, ||x|| <= 1, via the quadratic subproblem solver
/// at the origin with the orthant as the feasible set.
double min_orthant_ball(const Matrix& Q, Execution exec = Execution::parallel);

/// Independent reference for the same minimum: over every support set T, the
/// eigenvalues of Q_TT whose eigenvectors are sign-definite (n <= 16).
double min_orthant_ball_support(const Matrix& Q);

struct CorrespondenceReport {
  int n = 0;
  int t = 0;
  double min_value = 0.0;
  double threshold = 0.0;
  bool stable_exists = false;
  bool equivalence_holds = false;  // (min_value <= threshold) == stable_exists
  bool dichotomy_holds = false;    // min >= -1e-9 or min <= threshold + 1e-9
};

CorrespondenceReport check_correspondence(const Graph& G, int t, Execution exec = Execution::parallel);

/// Every graph on 1..n_max vertices (n_max <= 6) with every t in 1..n.
std::vector<CorrespondenceReport> sweep_exhaustive(int n_max, Execution exec = Execution::parallel);

/// `count` seeded random graphs with n uniform in [n_min, n_max] and edge
/// probability 1/2, every t in 1..n.
std::vector<CorrespondenceReport> sweep_random(int count, int n_min, int n_max, std::uint64_t seed,
                                               Execution exec = Execution::parallel);

}  // namespace saddle
