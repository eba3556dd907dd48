#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "levyrare/rng.hpp"
#include "levyrare/summary.hpp"

namespace levyrare {

inline constexpr const char* kWorkersEnv = "LEVYRARE_WORKERS";
inline constexpr std::uint64_t kChunkSize = 1024;

/// Worker count from LEVYRARE_WORKERS, else the hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Seed of one experiment cell, derived from the master seed and a tag.
inline std::uint64_t cell_seed(std::uint64_t master, std::string_view tag, double alpha, std::uint64_t n) {
  std::uint64_t h = Rng::mix(master);
  for (char c : tag) h = Rng::mix(h ^ static_cast<unsigned char>(c));
  std::uint64_t abits = 0;
  static_assert(sizeof(abits) == sizeof(alpha));
  std::memcpy(&abits, &alpha, sizeof(alpha));
  h = Rng::mix(h ^ abits);
  return Rng::mix(h ^ n);
}

/// Runs `count` replications of `draw(Rng&) -> double`. Replications are
/// grouped in fixed chunks of kChunkSize, chunk c using stream (seed, c);
/// chunk moments are merged in chunk order, so the result does not depend
/// on the number of workers.
template <class Draw>
MomentAccumulator replicate(std::uint64_t count, std::uint64_t seed, Draw&& draw, unsigned workers = worker_count()) {
  const std::uint64_t chunks = (count + kChunkSize - 1) / kChunkSize;
  std::vector<MomentAccumulator> parts(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        Rng rng(seed, c);
        const std::uint64_t end = std::min(count, (c + 1) * kChunkSize);
        MomentAccumulator acc;
        for (std::uint64_t i = c * kChunkSize; i < end; ++i) acc.add(draw(rng));
        parts[c] = acc;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };
  const unsigned nthreads = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers), chunks));
  if (nthreads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  MomentAccumulator total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

}  // namespace levyrare
