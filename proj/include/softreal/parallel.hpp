// Deterministic worker-pool helpers. Work is split into fixed chunks by
// index, each worker owns private state, and partial results merge in chunk
// order — so results are bit-identical for any worker count.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace softreal {

inline int default_jobs() {
    if (const char* env = std::getenv("SOFTREAL_JOBS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

inline int clamp_jobs(int jobs) {
    if (jobs < 1) jobs = default_jobs();
    const unsigned hw = std::thread::hardware_concurrency();
    if (hw > 0 && jobs > static_cast<int>(hw) * 4) jobs = static_cast<int>(hw) * 4;
    return jobs;
}

// Runs fn(worker_index, begin, end) over [0, n) split into `jobs` contiguous
// chunks. fn must only touch worker-private state indexed by worker_index.
template <class Fn>
void parallel_chunks(std::uint64_t n, int jobs, Fn&& fn) {
    jobs = clamp_jobs(jobs);
    if (jobs <= 1 || n <= 1) {
        fn(0, std::uint64_t{0}, n);
        return;
    }
    const auto workers = static_cast<std::uint64_t>(jobs);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t begin = n * w / workers;
        const std::uint64_t end = n * (w + 1) / workers;
        if (begin == end) continue;
        pool.emplace_back([&fn, w, begin, end] { fn(static_cast<int>(w), begin, end); });
    }
    for (auto& t : pool) t.join();
}

} // namespace softreal
