#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace fractfid {

/// Number of workers to use when the caller asks for 0 ("auto").
inline std::size_t default_workers() {
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs job(i) for i in [0, count) on up to `workers` threads and returns the
/// results in index order. Jobs must not share mutable state; the first
/// exception (lowest index) is rethrown after all workers have stopped.
template <class Result>
std::vector<Result> parallel_map(std::size_t count, std::size_t workers,
                                 const std::function<Result(std::size_t)>& job) {
    std::vector<Result> out(count);
    std::vector<std::exception_ptr> errors(count);
    if (workers == 0) workers = default_workers();
    workers = std::min(workers, std::max<std::size_t>(count, 1));

    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                out[i] = job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace fractfid
