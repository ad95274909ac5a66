#include "saddle_escape/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace saddle {

int thread_cap() {
  if (const char* env = std::getenv("SADDLE_ESCAPE_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

}  // namespace saddle
