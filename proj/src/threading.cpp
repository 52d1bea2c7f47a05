#include "lspec/threading.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>

#include "lspec/errors.hpp"
#include "lspec/log.hpp"

extern "C" {
void openblas_set_num_threads(int num_threads);
int openblas_get_num_threads(void);
}

namespace lspec {

namespace {
std::atomic<bool> g_warnings_enabled{true};
std::atomic<std::size_t> g_warning_count{0};
std::mutex g_log_mutex;
}  // namespace

void log_warning(std::string_view msg) {
  ++g_warning_count;
  if (!g_warnings_enabled.load()) return;
  std::lock_guard lock(g_log_mutex);
  std::cerr << "warning: " << msg << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings_enabled = enabled; }

std::size_t warning_count() { return g_warning_count.load(); }

int configure_threads_from_env() {
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (const char* env = std::getenv(kThreadsEnvVar); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const int parsed = std::stoi(env, &used);
      if (used != std::string(env).size() || parsed < 1) throw std::invalid_argument(env);
      threads = parsed;
    } catch (const std::exception&) {
      throw ConfigError(std::string(kThreadsEnvVar) + " must be a positive integer, got '" + env + "'");
    }
  }
  omp_set_num_threads(threads);
  openblas_set_num_threads(threads);
  return threads;
}

int max_threads() { return omp_get_max_threads(); }

SingleThreadedBlas::SingleThreadedBlas() : saved_(openblas_get_num_threads()) {
  openblas_set_num_threads(1);
}

SingleThreadedBlas::~SingleThreadedBlas() { openblas_set_num_threads(saved_); }

}  // namespace lspec
