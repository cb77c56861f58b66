#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

namespace bidisk {

/// Worker count used when a caller passes 0.
inline unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct ArgMax {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = 0;
  bool empty = true;
};

/// Maximum of `f(i)` over i in [0, n) with the lowest index winning ties.
/// The result does not depend on `threads`.
template <class F>
ArgMax parallel_argmax(std::size_t n, F&& f, unsigned threads = 0) {
  if (threads == 0) threads = default_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));

  auto scan = [&f](std::size_t lo, std::size_t hi) {
    ArgMax best;
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = f(i);
      if (best.empty || v > best.value) best = {v, i, false};
    }
    return best;
  };

  std::vector<ArgMax> partial(threads);
  if (threads <= 1) {
    partial[0] = scan(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = std::min(n, t * chunk);
      const std::size_t hi = std::min(n, lo + chunk);
      pool.emplace_back([&, t, lo, hi] { partial[t] = scan(lo, hi); });
    }
    for (auto& th : pool) th.join();
  }

  ArgMax best;
  for (const auto& p : partial) {
    if (p.empty) continue;
    if (best.empty || p.value > best.value || (p.value == best.value && p.index < best.index)) best = p;
  }
  return best;
}

/// Runs `f(i)` for i in [0, n), writing into `out[i]`; order-independent.
template <class T, class F>
void parallel_fill(std::vector<T>& out, F&& f, unsigned threads = 0) {
  const std::size_t n = out.size();
  if (threads == 0) threads = default_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = std::min(n, t * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace bidisk
