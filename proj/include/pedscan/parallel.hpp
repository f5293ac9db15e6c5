#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace pedscan {

/// Worker pool size and lane-group width. The group models a GPU warp as a
/// deterministic lane set with a fixed summation tree.
struct ExecConfig {
    std::size_t workers = 1;
    std::size_t group_width = 32;  // power of two

    static ExecConfig with_workers(std::size_t n) { return ExecConfig{n == 0 ? 1 : n, 32}; }
    static std::size_t hardware_workers() {
        unsigned n = std::thread::hardware_concurrency();
        return n == 0 ? 1 : static_cast<std::size_t>(n);
    }
};

namespace detail {

// Runs fn(first, last) over row chunks on `workers` threads; rethrows the
// first exception raised by any worker after all have joined.
template <typename ChunkFn>
void run_chunked(std::size_t count, std::size_t workers, ChunkFn&& fn) {
    if (count == 0) return;
    if (workers <= 1 || count == 1) {
        fn(std::size_t{0}, count);
        return;
    }
    if (workers > count) workers = count;
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    std::exception_ptr first_error;
    std::atomic_flag error_set = ATOMIC_FLAG_INIT;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        if (begin >= count) break;
        const std::size_t end = begin + chunk < count ? begin + chunk : count;
        threads.emplace_back([&, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                if (!error_set.test_and_set()) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

/// Executes body(y, x) for every cell of a height x width grid, each exactly
/// once. The body must write only to locations owned by (y, x).
template <typename Body>
void parallel_for_2d(std::size_t height, std::size_t width, Body&& body,
                     const ExecConfig& config = {}) {
    if (height == 0 || width == 0) return;
    detail::run_chunked(height, config.workers, [&](std::size_t y0, std::size_t y1) {
        for (std::size_t y = y0; y < y1; ++y)
            for (std::size_t x = 0; x < width; ++x) body(y, x);
    });
}

/// Adds 1 to counters[key_of(i)] for every item index, via atomic integer
/// adds. Exact for any worker count. Throws std::out_of_range on a bad key.
template <typename KeyFn>
void scatter_accumulate(std::size_t item_count, KeyFn&& key_of,
                        std::span<std::uint32_t> counters, const ExecConfig& config = {}) {
    detail::run_chunked(item_count, config.workers, [&](std::size_t i0, std::size_t i1) {
        for (std::size_t i = i0; i < i1; ++i) {
            const std::size_t bin = key_of(i);
            if (bin >= counters.size()) throw std::out_of_range("scatter_accumulate: key out of counter range");
            std::atomic_ref<std::uint32_t>(counters[bin]).fetch_add(1, std::memory_order_relaxed);
        }
    });
}

/// Strided lane-group sum of term(0..length-1). Lane L accumulates indices
/// L, L+G, L+2G, ... and partials are folded in a fixed binary tree, so the
/// result is deterministic for a given group_width.
template <typename TermFn>
double group_strided_reduce(std::size_t length, TermFn&& term, std::size_t group_width = 32) {
    if (group_width == 0) group_width = 1;
    std::vector<double> partial(group_width, 0.0);
    for (std::size_t lane = 0; lane < group_width; ++lane)
        for (std::size_t t = lane; t < length; t += group_width) partial[lane] += term(t);
    for (std::size_t offset = group_width / 2; offset >= 1; offset /= 2)
        for (std::size_t lane = 0; lane < offset; ++lane) partial[lane] += partial[lane + offset];
    return partial[0];
}

}  // namespace pedscan
