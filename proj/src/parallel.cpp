#include "dgum/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace dgum {

void set_num_threads(int threads) { omp_set_num_threads(threads < 1 ? 1 : threads); }

int num_threads() { return omp_get_max_threads(); }

int apply_thread_env() {
  if (const char* value = std::getenv(kThreadsEnv)) {
    try {
      const int threads = std::stoi(value);
      if (threads > 0) set_num_threads(threads);
    } catch (const std::exception&) {
      // Ignore malformed values; the OpenMP default stays in effect.
    }
  }
  return num_threads();
}

}  // namespace dgum
