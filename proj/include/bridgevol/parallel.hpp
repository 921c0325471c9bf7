#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace bridgevol::parallel {

inline int default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(task_index, begin, end) over [0, n) split into fixed-size chunks.
// The chunking is independent of the thread count, so per-task results can be
// reduced in task order to give output that does not depend on parallelism.
template <typename Fn>
void for_each_chunk(std::uint64_t n, std::uint64_t chunk, int threads, const Fn& fn) {
    if (n == 0) return;
    if (chunk == 0) chunk = 1;
    const std::uint64_t n_tasks = (n + chunk - 1) / chunk;
    if (threads <= 1 || n_tasks == 1) {
        for (std::uint64_t t = 0; t < n_tasks; ++t)
            fn(t, t * chunk, std::min(n, (t + 1) * chunk));
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t t = next.fetch_add(1);
            if (t >= n_tasks) return;
            fn(t, t * chunk, std::min(n, (t + 1) * chunk));
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min<std::uint64_t>(threads, n_tasks);
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

inline std::uint64_t task_count(std::uint64_t n, std::uint64_t chunk) {
    return chunk == 0 ? n : (n + chunk - 1) / chunk;
}

}  // namespace bridgevol::parallel
