#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace mrp {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
// independent and writes only its own slot, so results are identical for any
// thread count.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  threads = std::min(threads, count);
  std::vector<std::thread> workers;
  workers.reserve(threads);
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t)
    workers.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& w : workers) w.join();
}

// Stable per-task seed derivation (splitmix64 over the pair).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t task) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (task + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace mrp
