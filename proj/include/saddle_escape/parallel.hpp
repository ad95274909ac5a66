#pragma once

namespace saddle {

/// Thread budget for OpenMP kernels and sweeps: SADDLE_ESCAPE_THREADS when set
/// to a positive integer, otherwise the OpenMP default.
int thread_cap();

}  // namespace saddle
