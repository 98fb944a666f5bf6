#ifndef DGUM_PARALLEL_HPP
#define DGUM_PARALLEL_HPP

namespace dgum {

/// Name of the environment variable that overrides the worker thread count.
inline constexpr const char* kThreadsEnv = "DGUM_NUM_THREADS";

void set_num_threads(int threads);
int num_threads();

/// Applies kThreadsEnv when set to a positive integer. Returns the count in
/// effect afterwards.
int apply_thread_env();

}  // namespace dgum

#endif  // DGUM_PARALLEL_HPP
