#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace umbilic {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// Input parameters violate a documented precondition.
struct invalid_spec : std::invalid_argument {
  explicit invalid_spec(const std::string& msg) : std::invalid_argument(msg) {}
};

// An adaptive integral failed to reach its error target.
struct quadrature_error : std::runtime_error {
  explicit quadrature_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A height window cut away the entire surface.
struct empty_slab_error : std::runtime_error {
  explicit empty_slab_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical verification step hit a degenerate configuration.
struct verify_error : std::runtime_error {
  explicit verify_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double v) const { return v > lo && v < hi; }
  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
};

// 15 significant digits, lowercase scientific. Shared by every text exporter so
// reruns are byte-identical.
inline std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.14e", v);
  return std::string(buf);
}

// Worker cap: UMBILIC_THREADS when set (>=1), else hardware concurrency.
inline unsigned thread_budget() {
  if (const char* env = std::getenv("UMBILIC_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

// Runs fn(i) for i in [0, count). Each index owns its output slot, so results
// do not depend on the thread count. The first exception thrown by any worker
// is rethrown on the calling thread.
template <class F>
inline void parallel_for(std::size_t count, F&& fn) {
  std::size_t workers = std::min<std::size_t>(thread_budget(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace umbilic
