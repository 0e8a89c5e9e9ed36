#pragma once

// Reproducible parallel sampling. Work is cut into fixed-size chunks, each
// chunk draws from its own engine seeded by (seed, chunk index), and chunk
// results are reduced in chunk order, so output does not depend on the
// number of workers.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>

namespace liebox {

inline constexpr std::size_t kSampleChunk = 4096;

/// Engine for chunk `chunk` of a run seeded with `seed`.
std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk);

/// Calls fn(chunk, begin, end) for every chunk of [0, total), on up to
/// `workers` threads (0 = hardware concurrency). fn must only write to
/// per-chunk storage.
void for_each_chunk(std::size_t total, std::size_t chunk_size, unsigned workers,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

inline std::size_t chunk_count(std::size_t total, std::size_t chunk_size)
{
    return (total + chunk_size - 1) / chunk_size;
}

/// Wilson score interval for k successes in n trials at normal quantile z.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = 1.96);

}  // namespace liebox
