#include <algorithm>
#include <cmath>
#include <limits>

#include "saddle_escape/subsolvers.hpp"

namespace saddle {

namespace {

constexpr double kHardCaseTol = 1e-10;

struct Spectrum {
  Vector lam;    // ascending
  Matrix V;
  Vector chat;   // V^T c
  Vector gaps;   // lam - lam(0)
  double eig_tol = 0.0;
  Index cluster = 1;  // eigenvalues within eig_tol of the smallest
};

Spectrum decompose(const Matrix& Q, const Vector& c) {
  Spectrum s;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Q + Q.transpose()));
  s.lam = es.eigenvalues();
  s.V = es.eigenvectors();
  s.chat = s.V.transpose() * c;
  s.gaps = s.lam.array() - s.lam(0);
  s.eig_tol = 1e-11 * std::max(1.0, s.lam.cwiseAbs().maxCoeff());
  s.cluster = 0;
  while (s.cluster < s.lam.size() && s.gaps(s.cluster) <= s.eig_tol) ++s.cluster;
  return s;
}

// ||w(t)|| with w_i = -c_i / (gaps_i + t); zero numerators contribute nothing.
double secular_norm(const Vector& gaps, const Vector& c, double t) {
  double sum = 0.0;
  for (Index i = 0; i < gaps.size(); ++i) {
    if (c(i) == 0.0) continue;
    const double q = c(i) / (gaps(i) + t);
    sum += q * q;
  }
  return std::sqrt(sum);
}

Vector secular_point(const Vector& gaps, const Vector& c, double t) {
  Vector w(gaps.size());
  for (Index i = 0; i < gaps.size(); ++i) w(i) = c(i) == 0.0 ? 0.0 : -c(i) / (gaps(i) + t);
  return w;
}

// Root of ||w(t)|| = radius on (lo, hi] where ||w|| is decreasing.
// Safeguarded Newton on 1/radius - 1/||w(t)||.
double secular_root(const Vector& gaps, const Vector& c, double radius, double lo, double hi) {
  while (secular_norm(gaps, c, hi) > radius) hi = 2 * hi + 1.0;
  double t = hi;
  for (int it = 0; it < 500; ++it) {
    const double nw = secular_norm(gaps, c, t);
    if (std::abs(nw - radius) <= 1e-15 * radius) return t;
    if (nw > radius)
      lo = t;
    else
      hi = t;
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi))) break;
    double d3 = 0.0;
    for (Index i = 0; i < gaps.size(); ++i) {
      if (c(i) == 0.0) continue;
      const double den = gaps(i) + t;
      d3 += c(i) * c(i) / (den * den * den);
    }
    const double h = 1.0 / radius - 1.0 / nw;
    const double dh = -d3 / (nw * nw * nw);
    double next = t - h / dh;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  // Pick the bracket end with ||w|| closest to the radius.
  const double elo = std::abs(secular_norm(gaps, c, lo) - radius);
  const double ehi = std::abs(secular_norm(gaps, c, hi) - radius);
  return elo < ehi ? lo : hi;
}

void check_trs_input(const Matrix& Q, const Vector& c, double radius) {
  if (Q.rows() != Q.cols()) throw DimensionMismatch("solve_trs: Q must be square");
  if (c.size() != Q.rows()) throw DimensionMismatch("solve_trs: c has the wrong length");
  if (!(radius >= 0) || !std::isfinite(radius)) throw InvalidInput("solve_trs: radius must be finite and >= 0");
  if (Q.size() > 0 && (Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + Q.cwiseAbs().maxCoeff()))
    throw InvalidInput("solve_trs: Q is not symmetric");
}

double trs_value(const Matrix& Q, const Vector& c, const Vector& u) { return u.dot(Q * u) + 2 * c.dot(u); }

struct GlobalTrs {
  TrsSolution sol;
  Vector w;          // solution in eigen-coordinates
  double tau = 0.0;  // hard-case eigen-component
};

GlobalTrs global_trs(const Matrix& Q, const Vector& c, double radius, const Spectrum& s) {
  const Index k = Q.rows();
  GlobalTrs out;
  const double lam1 = s.lam(0);

  if (radius == 0.0) {
    out.w = Vector::Zero(k);
    out.sol = {Vector::Zero(k), 0.0, std::max(0.0, -lam1), false};
    return out;
  }

  // Interior (convex) solution.
  if (lam1 >= -s.eig_tol) {
    Vector p(k);
    bool ok = true;
    for (Index i = 0; i < k && ok; ++i) {
      if (s.lam(i) > s.eig_tol)
        p(i) = -s.chat(i) / s.lam(i);
      else if (std::abs(s.chat(i)) <= kHardCaseTol)
        p(i) = 0.0;
      else
        ok = false;
    }
    if (ok && p.norm() <= radius) {
      out.w = p;
      out.sol.u = s.V * p;
      out.sol.multiplier = 0.0;
      out.sol.value = trs_value(Q, c, out.sol.u);
      return out;
    }
  }

  const double c1 = s.chat.head(s.cluster).norm();
  const bool hard = c1 <= kHardCaseTol;
  Vector ceff = s.chat;
  if (hard) ceff.head(s.cluster).setZero();

  if (hard && lam1 < 0.0) {
    Vector p = Vector::Zero(k);
    for (Index i = s.cluster; i < k; ++i) p(i) = -ceff(i) / s.gaps(i);
    const double pn = p.norm();
    if (pn <= radius) {
      out.tau = std::sqrt(std::max(0.0, radius * radius - pn * pn));
      p(0) += out.tau;
      out.w = p;
      out.sol.u = s.V * p;
      out.sol.multiplier = -lam1;
      out.sol.hard_case = true;
      out.sol.value = trs_value(Q, c, out.sol.u);
      return out;
    }
  }

  const double lo = std::max(0.0, lam1);
  const double hi = std::max(lo, ceff.norm() / radius);
  const double t = secular_root(s.gaps, ceff, radius, lo, hi);
  out.w = secular_point(s.gaps, ceff, t);
  out.sol.u = s.V * out.w;
  out.sol.multiplier = t - lam1;
  out.sol.value = trs_value(Q, c, out.sol.u);
  return out;
}

double bisect(const auto& f, double a, double b) {
  // f(a) and f(b) have opposite signs (or are +/-inf).
  const bool fa_pos = f(a) > 0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if ((f(mid) > 0) == fa_pos)
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

}  // namespace

TrsSolution solve_trs(const Matrix& Q, const Vector& c, double radius) {
  check_trs_input(Q, c, radius);
  if (Q.rows() == 0) return {Vector(0), 0.0, 0.0, false};
  return global_trs(Q, c, radius, decompose(Q, c)).sol;
}

std::vector<Vector> trs_candidates(const Matrix& Q, const Vector& c, double radius) {
  check_trs_input(Q, c, radius);
  const Index k = Q.rows();
  if (k == 0) return {Vector(0)};
  const Spectrum s = decompose(Q, c);
  const GlobalTrs g = global_trs(Q, c, radius, s);
  std::vector<Vector> out{g.sol.u};
  if (radius == 0.0) return out;

  if (g.sol.hard_case) {
    // Every other point of the global solution set that differs only in the
    // smallest eigenspace component.
    Vector base = g.w;
    base(0) -= g.tau;
    for (Index j = 0; j < s.cluster; ++j) {
      for (double sign : {1.0, -1.0}) {
        if (j == 0 && sign > 0) continue;
        Vector w = base;
        w(j) += sign * g.tau;
        out.push_back(s.V * w);
      }
    }
  }

  if (k == 1) {
    // On a segment both endpoints can be local minimizers.
    for (double sign : {1.0, -1.0}) out.push_back(Vector::Constant(1, sign * radius));
    return out;
  }

  const double lam1 = s.lam(0);
  if (s.cluster != 1 || lam1 >= -s.eig_tol) return out;
  if (std::abs(s.chat(0)) <= kHardCaseTol) return out;

  // Local-nonglobal minimizers live at multipliers in (max(0, -lam2), -lam1),
  // i.e. t = lambda + lam1 in (max(lam1, -gap2), 0), where ||w(t)||^2 is convex.
  const double gap2 = s.gaps(1);
  const double lo = std::max(lam1, -gap2);
  const double a = lo + std::max(1e-14 * std::abs(lo), 1e-300);
  const double b = -std::max(1e-14 * std::abs(lo), 1e-300);
  if (!(a < b)) return out;

  auto phi = [&](double t) { return secular_norm(s.gaps, s.chat, t) - radius; };
  auto dphi = [&](double t) {
    double d = 0.0;
    for (Index i = 0; i < k; ++i) {
      if (s.chat(i) == 0.0) continue;
      const double den = s.gaps(i) + t;
      d -= s.chat(i) * s.chat(i) / (den * den * den);
    }
    return d;
  };

  double tm = a;
  if (dphi(a) < 0) tm = bisect(dphi, a, b);
  if (phi(tm) > 0) return out;
  std::vector<double> roots;
  if (phi(b) > 0) roots.push_back(bisect(phi, tm, b));
  if (phi(a) > 0) roots.push_back(bisect(phi, a, tm));
  for (double t : roots) out.push_back(s.V * secular_point(s.gaps, s.chat, t));
  return out;
}

}  // namespace saddle
