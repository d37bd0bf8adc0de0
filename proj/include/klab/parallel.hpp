#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace klab {

// Work is always decomposed into the same fixed chunk grid, whatever the
// thread count; callers merge per-chunk results in chunk order. That is the
// whole determinism story: identical outputs for --threads 1 and --threads N.
inline constexpr std::size_t kFixedChunkCount = 256;

inline std::vector<std::pair<std::size_t, std::size_t>> chunk_ranges(std::size_t n,
                                                                     std::size_t max_chunks = kFixedChunkCount) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (n == 0) return out;
    std::size_t chunks = std::min(n, max_chunks);
    out.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t begin = n * c / chunks;
        std::size_t end = n * (c + 1) / chunks;
        out.emplace_back(begin, end);
    }
    return out;
}

// Runs body(chunk_index) for every chunk, on up to `threads` workers pulling
// from an atomic counter. Chunks must write to disjoint state. The first
// exception thrown by any chunk is rethrown on the calling thread.
inline void parallel_chunks(std::size_t n_chunks, unsigned threads,
                            const std::function<void(std::size_t)>& body) {
    if (n_chunks == 0) return;
    if (threads <= 1 || n_chunks == 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) body(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            if (failed.load(std::memory_order_relaxed)) return;
            std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            try {
                body(c);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::size_t n_workers = std::min<std::size_t>(threads, n_chunks);
    std::vector<std::thread> pool;
    pool.reserve(n_workers - 1);
    for (std::size_t i = 0; i + 1 < n_workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// Compensated sum of value_of(i) for i in [0, n), chunked on the fixed grid
// and merged in chunk order: the result does not depend on the thread count.
template <typename Fn>
double deterministic_sum(std::size_t n, unsigned threads, Fn&& value_of) {
    auto ranges = chunk_ranges(n);
    std::vector<double> partial(ranges.size(), 0.0);
    parallel_chunks(ranges.size(), threads, [&](std::size_t c) {
        KahanSum acc;
        for (std::size_t i = ranges[c].first; i < ranges[c].second; ++i) acc.add(value_of(i));
        partial[c] = acc.value();
    });
    KahanSum total;
    for (double v : partial) total.add(v);
    return total.value();
}

inline unsigned hardware_threads() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

} // namespace klab
