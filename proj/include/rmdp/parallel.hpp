#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace rmdp {

/// Worker count used when callers pass 0: RMDP_SYNTH_THREADS if set,
/// otherwise the hardware concurrency.
int default_threads();
void set_default_threads(int n);

/// Runs body(begin, end) on contiguous static chunks of [0, n). Chunking does
/// not depend on timing, and callers write disjoint slots, so results do not
/// depend on the thread count.
template <class Body>
void parallel_chunks(std::size_t n, int threads, Body&& body) {
    if (threads <= 0) threads = default_threads();
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        body(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t b = w * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, w, b, e] {
            try {
                body(b, e);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

}  // namespace rmdp
