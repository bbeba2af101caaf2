/*
 * reduce.hpp — deterministic parallel accumulation.
 *
 * Floating-point sums must not depend on how many workers happen to run, so
 * reductions are organized around *fixed* work blocks:
 *
 *   · the index range is cut into blocks whose count and boundaries depend
 *     only on the problem size (never on the worker count);
 *   · workers pull block indices from an atomic counter and write each
 *     block's partial result into its own slot;
 *   · the partials are folded by a pairwise tree over the slot array.
 *
 * The tree's shape is a function of the block count alone, hence the result
 * is bit-identical for 1, 4, or any other number of workers.  The same holds
 * run-to-run on a fixed binary: there is no other source of reordering.
 */
#pragma once

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace aqrm {

/// Worker count: AQRM_THREADS env var when set (≥1), else an explicit
/// override, else the hardware concurrency.
inline int thread_count(int override_threads = 0) {
    if (const char* env = std::getenv("AQRM_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    if (override_threads >= 1) return override_threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

/// Pairwise tree fold: combines adjacent pairs until one value remains.
/// The association order depends only on v.size().
template <class T>
inline T tree_fold(std::vector<T> v) {
    if (v.empty()) return T{};
    while (v.size() > 1) {
        std::size_t half = v.size() / 2;
        for (std::size_t i = 0; i < half; ++i) v[i] = v[2 * i] + v[2 * i + 1];
        if (v.size() % 2 == 1) {
            v[half] = v[v.size() - 1];
            v.resize(half + 1);
        } else {
            v.resize(half);
        }
    }
    return v[0];
}

/// Evaluate f(block_index) for block_index ∈ [0, nblocks) — possibly in
/// parallel — and tree-fold the per-block results.  f must be pure in the
/// block index.  T needs operator+ and a default constructor meaning "zero".
template <class T, class F>
inline T block_sum(std::size_t nblocks, F&& f, int threads = 0) {
    if (nblocks == 0) return T{};
    std::vector<T> slots(nblocks);
    const int nw = std::min<std::size_t>(nblocks, static_cast<std::size_t>(thread_count(threads)));
    if (nw <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) slots[b] = f(b);
    } else {
        std::atomic<std::size_t> next{0};
        auto run = [&] {
            for (;;) {
                const std::size_t b = next.fetch_add(1);
                if (b >= nblocks) break;
                slots[b] = f(b);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(nw - 1);
        for (int i = 0; i + 1 < nw; ++i) pool.emplace_back(run);
        run();
        for (auto& th : pool) th.join();
    }
    return tree_fold(std::move(slots));
}

/// Fixed block length used for long node loops: blocks of 4096 items keep the
/// slot array small while making the tree shape independent of worker count.
inline constexpr std::size_t kBlockLen = 4096;

/// Deterministic blocked sum over an index range [0, n): f(i) is evaluated
/// for every item, accumulated serially within each fixed block, and the
/// block partials are tree-folded.
template <class T, class F>
inline T indexed_sum(std::size_t n, F&& f, int threads = 0) {
    const std::size_t nblocks = (n + kBlockLen - 1) / kBlockLen;
    return block_sum<T>(
        nblocks,
        [&](std::size_t b) {
            const std::size_t lo = b * kBlockLen;
            const std::size_t hi = std::min(n, lo + kBlockLen);
            T acc{};
            for (std::size_t i = lo; i < hi; ++i) acc = acc + f(i);
            return acc;
        },
        threads);
}

}  // namespace aqrm
