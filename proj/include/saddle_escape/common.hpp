#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace saddle {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Absolute tolerance on constraint slacks when deciding activity and feasibility.
inline constexpr double kActivityTol = 1e-9;

/// Relative pivot threshold for rank decisions in active-set factorizations.
inline constexpr double kRankTol = 1e-10;

/// Largest number of polytope rows the exact enumerators accept (2^12 subsets).
inline constexpr Index kEnumerationCap = 12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class InfeasiblePoint : public Error {
 public:
  using Error::Error;
};

class EnumerationCapExceeded : public Error {
 public:
  using Error::Error;
};

class EmptyFeasibleSet : public Error {
 public:
  using Error::Error;
};

/// Serial reference path or the OpenMP kernel. Both produce identical results.
enum class Execution { serial, parallel };

}  // namespace saddle
