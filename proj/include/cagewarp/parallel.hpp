// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace cagewarp {

/// Worker count: hardware concurrency, capped by CAGEWARP_THREADS when set.
unsigned default_worker_count();

/// Runs body(begin, end) over [0, count) split into contiguous chunks of at most
/// `grain` items handed out dynamically to `workers` threads. Every index is visited
/// exactly once; the first exception thrown by any chunk is rethrown after all workers
/// have stopped.
void parallel_for(std::size_t count, std::size_t grain, unsigned workers,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace cagewarp
