#pragma once

#include <cstddef>
#include <functional>

namespace dysmooth {

/// Worker count used by parallel scans. Reads DYSMOOTH_THREADS on first use
/// (0 or unset = hardware concurrency); set_thread_count overrides it.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Splits [0, total) into at most thread_count() contiguous chunks and runs
/// body(chunk_index, begin, end) for each one. Chunk boundaries depend only
/// on (total, chunk count), so callers that reduce per-chunk results in
/// chunk order get the same answer for any scheduling.
void parallel_chunks(std::size_t total,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
                     std::size_t chunks);

inline void parallel_chunks(
    std::size_t total,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  parallel_chunks(total, body, thread_count());
}

}  // namespace dysmooth
