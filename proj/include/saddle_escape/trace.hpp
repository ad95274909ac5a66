#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "saddle_escape/common.hpp"

namespace saddle {

enum class StepKind { first_order, second_order, projected_gradient, terminate };
enum class RunStatus { converged, max_iters };

std::string_view to_string(StepKind k);
std::string_view to_string(RunStatus s);

/// One iterate. X and psi are NaN for projected-gradient runs, which do not
/// evaluate the stationarity measures.
struct IterationRecord {
  long k = 0;
  double f = 0.0;
  double X = 0.0;
  double psi = 0.0;
  StepKind kind = StepKind::terminate;
  double step_length = 0.0;
  Vector x;
  std::optional<double> dist_origin;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  RunStatus status = RunStatus::max_iters;

  const IterationRecord& final() const { return records.back(); }
  /// Records that took a step (everything except the closing record).
  long steps() const;
};

}  // namespace saddle
