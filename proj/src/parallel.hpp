#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace encal::detail {

// Runs fn(lo, hi) over a partition of [0, n). Each chunk writes to disjoint
// output slots, so results do not depend on scheduling order.
template <typename Fn>
void parallel_chunks(std::size_t n, Fn&& fn, unsigned max_threads = 8) {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    unsigned workers = std::min({hw, max_threads, static_cast<unsigned>((n + 4095) / 4096)});
    if (workers <= 1 || n < 8192) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& t : threads) t.join();
}

}  // namespace encal::detail
