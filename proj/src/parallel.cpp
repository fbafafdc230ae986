#include "qwalk/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace qw {

void parallel_for(std::size_t n, unsigned n_threads,
                  const std::function<void(std::size_t begin, std::size_t end)>& body) {
    if (n == 0) return;
    if (n_threads <= 1 || n == 1) {
        body(0, n);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(n_threads, n);
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& t : pool) t.join();
}

} // namespace qw
