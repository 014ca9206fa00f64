#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ergodic_spectra {

/// Environment variable that overrides any requested worker count.
inline constexpr const char* kThreadsEnvVar = "ERGODIC_SPECTRA_THREADS";

/// Worker count after applying the environment override; 0 means hardware concurrency.
std::size_t resolve_threads(std::size_t requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Results must
/// be written to per-index slots; scheduling order is unspecified.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

/// Fixed-shape pairwise summation: the tree depends only on values.size().
template <typename T>
T pairwise_sum(std::span<const T> values) {
  if (values.empty()) return T{};
  if (values.size() == 1) return values[0];
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace ergodic_spectra
