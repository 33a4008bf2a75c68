#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace ceildyn {

/// Evaluates fn(i) for i in [lo, hi] on `workers` threads. The range is split
/// into contiguous blocks and results come back in index order, so the output
/// does not depend on the worker count. The first exception thrown by any
/// block is rethrown after all threads join.
template <class Fn>
auto parallel_range(std::int64_t lo, std::int64_t hi, unsigned workers, Fn fn) {
    using T = decltype(fn(lo));
    std::vector<T> out;
    if (hi < lo) return out;
    const auto n = static_cast<std::size_t>(hi - lo + 1);
    out.resize(n);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::size_t>(n, 1024))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(lo + static_cast<std::int64_t>(i));
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        const std::size_t block = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * block;
            const std::size_t end = std::min(n, begin + block);
            if (begin >= end) break;
            pool.emplace_back([&, w, begin, end] {
                try {
                    for (std::size_t i = begin; i < end; ++i) out[i] = fn(lo + static_cast<std::int64_t>(i));
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace ceildyn
