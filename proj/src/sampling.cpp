#include "solitonforge/sampling.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace sf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t attempt,
                       std::uint64_t coordinate) {
    std::uint64_t counter = (sample << 16) ^ (attempt << 8) ^ coordinate;
    std::uint64_t bits = splitmix64(seed ^ splitmix64(counter));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

sample_set sample_box(std::span<const interval> box, int count, std::uint64_t seed,
                      const point_validator& validator) {
    if (count < 1) throw std::invalid_argument("sample count must be positive");
    sample_set out;
    const int n = static_cast<int>(box.size());
    for (int s = 0; s < count; ++s) {
        std::vector<double> p(n);
        std::optional<std::string> reason;
        bool accepted = false;
        for (int attempt = 0; attempt < 100 && !accepted; ++attempt) {
            for (int d = 0; d < n; ++d) {
                double u = counter_uniform(seed, static_cast<std::uint64_t>(s),
                                           static_cast<std::uint64_t>(attempt),
                                           static_cast<std::uint64_t>(d));
                p[d] = box[d].lo + u * (box[d].hi - box[d].lo);
            }
            reason = validator ? validator(p) : std::nullopt;
            accepted = !reason.has_value();
        }
        if (accepted)
            out.points.push_back(std::move(p));
        else
            out.exclusions.push_back({s, std::move(p), reason.value_or("rejected")});
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
}

int thread_cap() {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("SOLITON_FORGE_THREADS")) {
        char* tail = nullptr;
        long v = std::strtol(env, &tail, 10);
        if (tail != env && *tail == '\0' && v >= 1)
            cap = std::min<long>(cap, v);
    }
    return cap;
}

void parallel_for_indices(int count, const std::function<void(int)>& fn) {
    const int threads = std::min(count, thread_cap());
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (int i = t; i < count; i += threads) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace sf
