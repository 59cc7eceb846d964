#include "horndelta/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace horndelta {

unsigned default_worker_count() {
    if (const char* env = std::getenv("HORN_DELTA_WORKERS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

namespace {

void run_threads(unsigned count, const std::function<void(unsigned)>& body) {
    if (count <= 1) {
        body(0);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> threads;
    threads.reserve(count);
    for (unsigned w = 0; w < count; ++w) {
        threads.emplace_back([&, w] {
            try {
                body(w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

void parallel_items(std::size_t n, unsigned workers,
                    const std::function<void(unsigned, std::size_t)>& fn) {
    if (n == 0) return;
    workers = std::max(1u, workers);
    if (workers == 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(0, i);
        return;
    }
    // Small grab blocks keep the queue balanced when item costs are skewed.
    const std::size_t block = std::max<std::size_t>(1, n / (workers * 64));
    std::atomic<std::size_t> next{0};
    run_threads(std::min<std::size_t>(workers, n), [&](unsigned w) {
        for (;;) {
            std::size_t begin = next.fetch_add(block, std::memory_order_relaxed);
            if (begin >= n) return;
            std::size_t end = std::min(n, begin + block);
            for (std::size_t i = begin; i < end; ++i) fn(w, i);
        }
    });
}

void parallel_ranges(std::size_t n, unsigned workers,
                     const std::function<void(unsigned, std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    workers = std::max(1u, workers);
    unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (used == 1) {
        fn(0, 0, n);
        return;
    }
    const std::size_t chunk = (n + used - 1) / used;
    run_threads(used, [&](unsigned w) {
        std::size_t begin = static_cast<std::size_t>(w) * chunk;
        std::size_t end = std::min(n, begin + chunk);
        if (begin < end) fn(w, begin, end);
    });
}

}  // namespace horndelta
