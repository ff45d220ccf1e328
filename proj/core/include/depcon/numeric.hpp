#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

namespace depcon {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Thread count used when the caller passes 0: the DEPCON_THREADS environment
/// variable if set and positive, otherwise the hardware concurrency.
std::size_t default_thread_count();

std::size_t resolve_threads(std::size_t requested);

/// Runs `fn(begin, end)` over a fixed partition of [0, count) into contiguous
/// blocks. Callers write only to disjoint outputs indexed inside their block,
/// so results never depend on the number of threads.
template <typename Fn>
void parallel_for_blocks(std::size_t count, std::size_t threads, Fn&& fn) {
    threads = std::min(resolve_threads(threads), std::max<std::size_t>(count, 1));
    if (threads <= 1 || count < 2) {
        fn(std::size_t{0}, count);
        return;
    }
    const std::size_t block = (count + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t begin = 0; begin < count; begin += block) {
        const std::size_t end = std::min(count, begin + block);
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) {
        t.join();
    }
}

/// SplitMix64 finalizer; used to derive independent child seeds from a user seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept {
    return mix_seed(parent ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

} // namespace depcon
