#pragma once

namespace lspec {

/// Environment variable holding the worker-thread count.
inline constexpr const char* kThreadsEnvVar = "LSPEC_NUM_THREADS";

/// Applies LSPEC_NUM_THREADS (default: available parallelism) to OpenMP and
/// the BLAS backend. Returns the thread count in effect.
int configure_threads_from_env();

int max_threads();

/// Pins the BLAS backend to one thread for the guard's lifetime, for LAPACK
/// calls made from inside OpenMP worker loops.
class SingleThreadedBlas {
 public:
  SingleThreadedBlas();
  ~SingleThreadedBlas();
  SingleThreadedBlas(const SingleThreadedBlas&) = delete;
  SingleThreadedBlas& operator=(const SingleThreadedBlas&) = delete;

 private:
  int saved_;
};

}  // namespace lspec
