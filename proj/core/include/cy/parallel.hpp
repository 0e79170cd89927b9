#pragma once

#include <cstddef>
#include <functional>

namespace cy {

/// Data-parallel width: hardware concurrency capped by the CY_THREADS
/// environment variable (1 disables threading). Only pointwise maps and
/// independent FFT lines are parallelized; reductions stay sequential so
/// outputs are byte-identical for any width.
int max_threads();

/// Calls f(begin, end) on disjoint subranges of [0, n), possibly from
/// worker threads. f must not touch shared mutable state across ranges.
void parallel_ranges(std::size_t n, const std::function<void(std::size_t, std::size_t)>& f);

}  // namespace cy
