#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace tetquad::detail {

/// Run body(0..chunks-1) across the given number of threads.  Chunk
/// identities are fixed, so callers that reduce per-chunk results in chunk
/// order get output independent of the thread count.
inline void run_chunked(int chunks, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || chunks <= 1) {
        for (int c = 0; c < chunks; ++c) body(c);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const int c = next.fetch_add(1);
                if (c >= chunks) return;
                body(c);
            }
        });
    for (auto& th : pool) th.join();
}

}  // namespace tetquad::detail
