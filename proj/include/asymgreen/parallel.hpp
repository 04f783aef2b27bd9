#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#include <omp.h>

namespace asymgreen {

// requested > 0 wins, then ASYMGREEN_THREADS, then the OpenMP default.
int resolve_threads(int requested = 0);

// fn(i) for i in [0, n) on an OpenMP team; the first exception is rethrown.
// fn must only write to slot i of its outputs.
template <class Fn>
void parallel_for(std::size_t n, int threads, const Fn& fn) {
  std::exception_ptr failure;
  std::mutex m;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(resolve_threads(threads))
  for (long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(m);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace asymgreen
