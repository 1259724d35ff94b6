#pragma once

#include <cstddef>
#include <functional>

namespace emkm {

/// Worker threads used by the data-parallel kernels. Defaults to the hardware
/// concurrency. Results never depend on this value.
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Invokes fn(begin, end) on consecutive chunks of [0, n) of size `chunk`
/// (the last may be shorter). Chunk boundaries depend only on n and chunk.
/// The first exception thrown by any chunk is rethrown.
void parallel_chunks(std::size_t n, std::size_t chunk, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace emkm
