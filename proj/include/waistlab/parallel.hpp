// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "waistlab/philox.hpp"

namespace waistlab {

//! Samples per RNG chunk.  Fixed so that the chunk decomposition, and with
//! it every random draw, is a pure function of (seed, stream, total).
inline constexpr std::uint64_t kChunkSamples = 1ull << 16;

//! Streaming mean/variance accumulator for Monte Carlo sums.
struct MomentAccum {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  void merge(const MomentAccum& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    n += o.n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double stderr_of_mean() const {
    if (n < 2) return 0.0;
    const double m = mean();
    double var = sum_sq / static_cast<double>(n) - m * m;
    if (var < 0) var = 0;
    return std::sqrt(var / static_cast<double>(n));
  }
};

//! Runs `body(rng, count, acc)` over fixed-size chunks of a sample budget
//! and folds the per-chunk accumulators in chunk order.  The fold order and
//! the per-chunk RNG streams do not depend on the worker count, so results
//! are bit-identical for any `workers`.
template <class Accum, class Body>
Accum chunked_reduce(std::uint64_t total, std::uint64_t seed, std::uint64_t stream,
                     int workers, Body&& body) {
  const std::uint64_t chunks = total ? (total + kChunkSamples - 1) / kChunkSamples : 0;
  std::vector<Accum> parts(chunks);

  auto run_chunk = [&](std::uint64_t c) {
    const std::uint64_t lo = c * kChunkSamples;
    const std::uint64_t count = std::min(kChunkSamples, total - lo);
    Philox4x32 rng(seed, stream, static_cast<std::uint32_t>(c));
    body(rng, count, parts[c]);
  };

  if (workers <= 1 || chunks <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::uint64_t c = next.fetch_add(1);
        if (c >= chunks) return;
        run_chunk(c);
      }
    };
    const int nthreads = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), chunks));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  Accum out{};
  for (const auto& p : parts) out.merge(p);
  return out;
}

}  // namespace waistlab
