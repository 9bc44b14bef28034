#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace synthlab {

// Runs fn(block_index) for block_index in [0, n_blocks). Blocks are fixed work
// units, so any partial results indexed by block combine into a result that
// does not depend on the thread count. With threads <= 1 the loop is serial.
inline void parallel_for_blocks(std::size_t n_blocks, int threads,
                                const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n_blocks <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            fn(b);
        return;
    }
    std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n_blocks);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t b = next.fetch_add(1);
                if (b >= n_blocks)
                    return;
                fn(b);
            }
        });
    }
    for (auto& t : pool)
        t.join();
}

} // namespace synthlab
