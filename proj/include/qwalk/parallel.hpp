#pragma once

#include <cstddef>
#include <functional>

namespace qw {

// Static contiguous partition of [0, n) over n_threads workers. Each index is
// handled by exactly one worker and workers share no accumulators, so results
// are bitwise independent of the thread count.
void parallel_for(std::size_t n, unsigned n_threads,
                  const std::function<void(std::size_t begin, std::size_t end)>& body);

} // namespace qw
