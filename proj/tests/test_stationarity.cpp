#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "saddle_escape/stationarity.hpp"
#include "saddle_escape/subsolvers.hpp"
#include "saddle_escape/verification.hpp"

using namespace saddle;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

const double kPhiInv = (std::sqrt(5.0) - 1) / 2;

}  // namespace

TEST(FirstOrderMeasure, Examples) {
  const Problem ce = counterexample_problem();
  EXPECT_EQ(first_order_measure(ce.oracle, ce.feasible_set, vec({0, 0})), 0.0);

  const Problem q = quad1d_problem();
  EXPECT_NEAR(first_order_measure(q.oracle, q.feasible_set, vec({0.5})), 1.0, 1e-15);

  const Vector x = vec({0.5, -0.5});
  const Vector g = ce.oracle.gradient(x);
  const double X = first_order_measure(ce.oracle, ce.feasible_set, x);
  const BruteForceResult bf =
      brute_force_direction([&](const Vector& d) { return g.dot(d); }, ce.feasible_set, x, std::nullopt);
  EXPECT_GT(X, 0.0);
  EXPECT_NEAR(X, -bf.value, 1e-3);
}

TEST(SecondOrderMeasure, Examples) {
  const Problem ce = counterexample_problem();
  const double psi = second_order_measure(ce.oracle, ce.feasible_set, vec({0, 0}));
  EXPECT_NEAR(psi, kPhiInv, 1e-12);

  // The feasible direction (-1, -1)/sqrt(2) already certifies psi >= 0.5.
  const Vector d = vec({-1, -1}) / std::sqrt(2.0);
  EXPECT_NEAR(d.dot(ce.oracle.hessian(vec({0, 0})) * d), -0.5, 1e-15);
  EXPECT_GE(psi, 0.5);

  const Problem q = quad1d_problem();
  EXPECT_EQ(second_order_measure(q.oracle, q.feasible_set, vec({0.3})), 0.0);
}

TEST(Classify, Examples) {
  const Problem ce = counterexample_problem();
  const StationarityReport origin = classify(ce.oracle, ce.feasible_set, vec({0, 0}), 1e-4, 1e-4);
  EXPECT_EQ(origin.verdict, Verdict::fosp);
  EXPECT_NEAR(origin.second_order, kPhiInv, 1e-12);

  const Problem q = quad1d_problem();
  EXPECT_EQ(classify(q.oracle, q.feasible_set, vec({0}), 1e-4, 1e-4).verdict, Verdict::sosp);

  EXPECT_EQ(classify(ce.oracle, ce.feasible_set, vec({0.5, -0.5}), 1e-4, 1e-4).verdict, Verdict::neither);
}

TEST(Classify, RejectsBadInput) {
  const Problem ce = counterexample_problem();
  EXPECT_THROW(classify(ce.oracle, ce.feasible_set, vec({1, 1}), 1e-4, 1e-4), InfeasiblePoint);
  EXPECT_THROW(classify(ce.oracle, ce.feasible_set, vec({0, 0}), 0.0, 1e-4), InvalidInput);
  EXPECT_THROW(first_order_measure(ce.oracle, ce.feasible_set, vec({0.1, 0.2})), InfeasiblePoint);
}

TEST(Classify, VerdictNamesAndConsistency) {
  EXPECT_EQ(to_string(Verdict::sosp), "SOSP");
  EXPECT_EQ(to_string(Verdict::fosp), "FOSP");
  EXPECT_EQ(to_string(Verdict::neither), "neither");
  const Problem ce = counterexample_problem();
  for (const Vector& x : sample_feasible(ce, 50, 8)) {
    const StationarityReport r = classify(ce.oracle, ce.feasible_set, x, 1e-2, 1e-2);
    EXPECT_GE(r.first_order, 0.0);
    EXPECT_GE(r.second_order, 0.0);
    if (r.verdict == Verdict::sosp) {
      EXPECT_LE(r.first_order, r.eps_g);
    }
  }
}

TEST(Measures, AreContinuousUnderSmallPerturbations) {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> N;
  for (const Problem& p : bundled_problems()) {
    const std::vector<Vector> xs = sample_feasible(p, 200, 55);
    for (const Vector& x : xs) {
      Vector delta(x.size());
      Vector y;
      int tries = 0;
      do {
        for (Index i = 0; i < delta.size(); ++i) delta(i) = N(rng);
        delta *= 1e-4 * std::uniform_real_distribution<double>(0, 1)(rng) / delta.norm();
        y = x + delta;
      } while (!contains(p.feasible_set, y, 0.0) && ++tries < 100);
      if (!contains(p.feasible_set, y, 0.0)) continue;
      EXPECT_NEAR(first_order_measure(p.oracle, p.feasible_set, y), first_order_measure(p.oracle, p.feasible_set, x),
                  1e-2);
      EXPECT_NEAR(second_order_measure(p.oracle, p.feasible_set, y),
                  second_order_measure(p.oracle, p.feasible_set, x), 1e-2);
    }
  }
}

namespace {

// min over sampled feasible y of <grad f(x), y - x>.
double worst_vi(const Problem& p, const Vector& x, std::uint64_t seed) {
  double worst = INFINITY;
  const Vector g = p.oracle.gradient(x);
  for (const Vector& y : sample_feasible(p, 1000, seed)) worst = std::min(worst, g.dot(y - x));
  return worst;
}

}  // namespace

TEST(Measures, ZeroFirstOrderMeasureMatchesTheVariationalInequality) {
  // Stationary points: the saddle, the interior minimum of x^2, and a
  // boundary point of (x - 2)^2 on [-1, 1] where the gradient points outward.
  const Problem ce = counterexample_problem();
  const Problem q = quad1d_problem();
  Matrix Q(1, 1);
  Q << 2;
  Problem shifted = q;
  shifted.oracle = quadratic_oracle(Q, vec({-4}), 1.0);
  shifted.x0 = vec({1});

  for (const auto& [p, x] : std::vector<std::pair<Problem, Vector>>{
           {ce, vec({0, 0})}, {q, vec({0})}, {shifted, vec({1})}}) {
    EXPECT_EQ(first_order_measure(p.oracle, p.feasible_set, x), 0.0);
    EXPECT_GE(worst_vi(p, x, 3), -1e-8);
  }

  // Non-stationary points violate it somewhere.
  for (const auto& [p, x] : std::vector<std::pair<Problem, Vector>>{{ce, vec({0.5, -0.5})}, {q, vec({0.5})}}) {
    EXPECT_GT(first_order_measure(p.oracle, p.feasible_set, x), 0.0);
    EXPECT_LT(worst_vi(p, x, 4), -1e-8);
  }
}

TEST(Measures, StrictSaddleCertificateAtTheOrigin) {
  const Problem ce = counterexample_problem();
  EXPECT_LE(first_order_measure(ce.oracle, ce.feasible_set, vec({0, 0})), 1e-10);
  EXPECT_GE(second_order_measure(ce.oracle, ce.feasible_set, vec({0, 0})), 0.5);
}
