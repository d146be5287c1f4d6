#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "quasichaos/errors.hpp"

namespace quasichaos::sweep {

// Worker count resolution: explicit value > QUASICHAOS_WORKERS env > hardware.
int default_workers();
int resolve_workers(int requested);

template <typename T>
struct Outcome {
  std::optional<T> value;
  std::string error;  // nonempty if the point failed

  bool ok() const { return value.has_value(); }
};

// Runs f(0..n-1) on a small worker pool. Results are stored by grid index, so
// output order never depends on the worker count or completion order; a
// failure is isolated to its point.
template <typename T>
std::vector<Outcome<T>> map(int n, int workers, const std::function<T(int)>& f) {
  std::vector<Outcome<T>> results(n);
  const int pool = std::min(resolve_workers(workers), std::max(n, 1));
  std::atomic<int> next{0};
  auto body = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) break;
      try {
        results[i].value = f(i);
      } catch (const std::exception& e) {
        results[i].error = e.what();
      } catch (...) {
        results[i].error = "unknown error";
      }
    }
  };
  if (pool <= 1) {
    body();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (int t = 0; t < pool; ++t) threads.emplace_back(body);
    for (auto& t : threads) t.join();
  }
  return results;
}

template <typename T>
const T& value_or_throw(const Outcome<T>& o) {
  if (!o.ok()) throw std::runtime_error("sweep point failed: " + o.error);
  return *o.value;
}

}  // namespace quasichaos::sweep
