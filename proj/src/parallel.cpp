#include "bindiag/parallel.hpp"

#include <omp.h>

#include <exception>
#include <mutex>

namespace bindiag {

namespace {
int g_threads = 0;
}

void setThreadCount(int threads) { g_threads = threads < 0 ? 0 : threads; }

int threadCount() { return g_threads > 0 ? g_threads : omp_get_num_procs(); }

void parallelFor(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::exception_ptr failure;
  std::mutex failureMutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(threadCount())
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(failureMutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace bindiag
