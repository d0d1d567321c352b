#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace iaf {

/// Runs body(i) for i in [0, count) on up to `workers` threads. Each index is
/// evaluated exactly once, so results written by index do not depend on the
/// worker count. The exception from the lowest failing index is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](std::atomic<std::size_t>& next) {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  std::atomic<std::size_t> next{0};
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (threads <= 1) {
    run(next);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back([&] { run(next); });
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace iaf
