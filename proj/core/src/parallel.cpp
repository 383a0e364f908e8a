#include "lfdepth/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace lfdepth {

namespace {
std::atomic<int> g_num_threads{0};

int resolved_threads() {
    int n = g_num_threads.load(std::memory_order_relaxed);
    if (n <= 0) {
        n = static_cast<int>(std::thread::hardware_concurrency());
    }
    return std::max(1, n);
}
}  // namespace

void set_num_threads(int n) {
    g_num_threads.store(n < 0 ? 0 : n, std::memory_order_relaxed);
}

int num_threads() {
    return resolved_threads();
}

void parallel_for(int begin, int end, const std::function<void(int)>& fn) {
    const int count = end - begin;
    if (count <= 0) {
        return;
    }
    const int workers = std::min(resolved_threads(), count);
    if (workers == 1) {
        for (int i = begin; i < end; ++i) {
            fn(i);
        }
        return;
    }
    auto run_chunk = [&](int w) {
        const int lo = begin + static_cast<int>(static_cast<long long>(count) * w / workers);
        const int hi = begin + static_cast<int>(static_cast<long long>(count) * (w + 1) / workers);
        for (int i = lo; i < hi; ++i) {
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers) - 1);
    for (int w = 1; w < workers; ++w) {
        pool.emplace_back(run_chunk, w);
    }
    run_chunk(0);
    for (auto& t : pool) {
        t.join();
    }
}

}  // namespace lfdepth
