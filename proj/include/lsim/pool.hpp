#pragma once
// Minimal bounded worker pool: runs fn(i) for i in [0, n_tasks) on up to
// `jobs` threads. Tasks must write only to their own output slots; results
// are then deterministic regardless of scheduling.

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace lsim {

inline void parallel_for(std::size_t n_tasks, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs < 1) jobs = 1;
    std::size_t n_threads = std::min<std::size_t>(jobs, n_tasks);
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (std::size_t w = 0; w < n_threads; ++w)
        workers.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n_tasks) return;
                fn(i);
            }
        });
    for (auto& th : workers) th.join();
}

}  // namespace lsim
