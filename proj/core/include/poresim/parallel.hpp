#pragma once

#include <cstddef>
#include <functional>

namespace poresim {

/// Worker count for node-parallel loops. Defaults to the PORESIM_THREADS
/// environment variable, else 1 (sequential, fully deterministic either way:
/// parallel loops write disjoint slots and never reduce).
int thread_count();
void set_thread_count(int n);

/// Runs fn(i) for i in [0, n). Partitions across thread_count() workers when
/// that pays off; the per-index work must be independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace poresim
