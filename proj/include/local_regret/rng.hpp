#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace local_regret {

using Rng = std::mt19937_64;

/// Derives an independent 64-bit seed for a named component stream.
/// Every random quantity in the library is drawn from a stream obtained
/// this way from one root seed, so runs are reproducible from that seed.
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t root, std::string_view tag, std::uint64_t index = 0) {
  return Rng(derive_seed(root, tag, index));
}

/// Uniform double in [0, 1) with 53 random bits. Independent of the
/// standard library's distribution implementations.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Uniform integer in [0, bound) by rejection (no modulo bias).
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

/// Fisher-Yates shuffle driven by uniform_index.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

/// Number of worker threads: hardware concurrency, capped by the
/// LOCAL_REGRET_THREADS environment variable when set.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads.
/// Callers write into preallocated slots, so results do not depend on
/// the schedule.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace local_regret
