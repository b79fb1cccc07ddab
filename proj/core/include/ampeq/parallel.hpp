#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ampeq {

// --jobs fallback chain: explicit value, AMPEQ_JOBS, hardware concurrency.
inline std::size_t resolve_jobs(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("AMPEQ_JOBS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

// Bounded worker pool over the index range [0, n). Work items are handed
// out through a shared counter, so the assignment of items to threads is
// load-dependent -- reductions over the results must be order-independent
// (callers index into preallocated slots).
inline void parallel_for(std::size_t n, std::size_t jobs,
                         const std::function<void(std::size_t)>& body) {
    jobs = resolve_jobs(jobs);
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    const std::size_t nthreads = std::min(jobs, n);
    threads.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ampeq
