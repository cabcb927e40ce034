#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#include "ordercert/exec.hpp"

namespace ordercert::detail {

/// Runs fn(i) for i in [0, n). The parallel path is an OpenMP loop; the
/// first exception thrown by any iteration is rethrown afterwards.
template <typename Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex mutex;
  auto const count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::scoped_lock lock(mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace ordercert::detail
