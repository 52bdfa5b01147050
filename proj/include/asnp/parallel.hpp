#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

namespace asnp {

namespace detail {
inline std::atomic<unsigned> g_thread_default{0};
}

// worker count used when a caller passes threads = 0
inline unsigned thread_default() {
    unsigned v = detail::g_thread_default.load(std::memory_order_relaxed);
    if (v != 0) return v;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// n = 0 restores the hardware default
inline void set_thread_default(unsigned n) { detail::g_thread_default.store(n, std::memory_order_relaxed); }

// chunk size is fixed so the work decomposition never depends on the worker count
inline constexpr std::uint64_t kParallelChunk = std::uint64_t(1) << 18;

// Runs work(state, begin, end) over fixed-size chunks of [0, total), with one
// state per worker (copied from init) and dynamic chunk assignment.  Returns
// all worker states.  Each index lands in exactly one chunk, so any
// commutative, associative merge of the states is independent of the worker
// count and of scheduling; that is the determinism contract callers rely on.
template <class State, class Work>
std::vector<State> chunked_reduce(std::uint64_t total, const State& init, Work work, unsigned threads = 0) {
    unsigned nw = threads == 0 ? thread_default() : threads;
    if (nw == 0) nw = 1;
    std::uint64_t nchunks = total == 0 ? 0 : (total - 1) / kParallelChunk + 1;
    if (nw > nchunks && nchunks > 0) nw = static_cast<unsigned>(nchunks);
    if (nw == 0) nw = 1;

    std::vector<State> states(nw, init);
    if (nchunks == 0) return states;

    std::atomic<std::uint64_t> next{0};
    auto body = [&](State& st) {
        for (;;) {
            std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= nchunks) break;
            std::uint64_t begin = c * kParallelChunk;
            std::uint64_t end = begin + kParallelChunk < total ? begin + kParallelChunk : total;
            work(st, begin, end);
        }
    };

    if (nw == 1) {
        body(states[0]);
        return states;
    }
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (unsigned w = 0; w < nw; ++w) pool.emplace_back([&, w] { body(states[w]); });
    for (auto& t : pool) t.join();
    return states;
}

}  // namespace asnp
