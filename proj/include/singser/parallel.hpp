#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace singser {

/// Runs fn(block) for block in [0, blocks) on up to `threads` workers.
/// The block decomposition is chosen by the caller and does not depend on
/// the thread count, so per-block results merged in block order are
/// identical for any `threads`. The first exception thrown by a block is
/// rethrown on the calling thread.
template <class Fn>
void parallel_blocks(std::size_t blocks, unsigned threads, Fn&& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(blocks, 1))));
    if (threads == 1) {
        for (std::size_t b = 0; b < blocks; ++b) fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t b; !failed.load() && (b = next.fetch_add(1)) < blocks;) {
            try {
                fn(b);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Default worker count: hardware concurrency, at least 1.
inline unsigned default_threads() {
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace singser
