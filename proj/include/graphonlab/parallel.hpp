#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace graphonlab {

// Worker count resolution: explicit override > GRAPHONLAB_THREADS > hardware.
inline int& thread_override() {
    static int n = 0;
    return n;
}

inline void set_thread_count(int n) { thread_override() = n; }

inline int thread_count() {
    if (thread_override() > 0) return thread_override();
    if (const char* env = std::getenv("GRAPHONLAB_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(chunk_index) for chunk_index in [0, chunks) on a small pool.
// Chunk indices are handed out dynamically but the caller owns one result
// slot per chunk, so reductions stay deterministic regardless of scheduling.
inline void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& fn) {
    int workers = thread_count();
    if (workers <= 1 || chunks <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) fn(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        while (true) {
            std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            fn(c);
        }
    };
    std::vector<std::thread> pool;
    int spawn = std::min<std::size_t>(workers, chunks) - 1;
    pool.reserve(spawn);
    for (int i = 0; i < spawn; ++i) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
}

}  // namespace graphonlab
