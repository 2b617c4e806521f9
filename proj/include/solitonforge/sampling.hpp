#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "solitonforge/geometry.hpp"

namespace sf {

/// Counter-based uniform draw: the value depends only on (seed, sample,
/// attempt, coordinate), never on generator state, so samples are stable
/// across platforms and thread counts.
double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t attempt,
                       std::uint64_t coordinate);

struct exclusion_record {
    int sample_index = 0;
    std::vector<double> last_point;
    std::string reason;
};

struct sample_set {
    std::vector<std::vector<double>> points;  // sorted lexicographically
    std::vector<exclusion_record> exclusions;
};

/// Returns nullopt when the point is usable, otherwise the rejection reason.
using point_validator = std::function<std::optional<std::string>(std::span<const double>)>;

/// Draw `count` points uniformly from the box. Points rejected by the
/// validator are re-drawn up to 100 attempts and then reported as exclusions.
sample_set sample_box(std::span<const interval> box, int count, std::uint64_t seed,
                      const point_validator& validator = nullptr);

/// Parallelism cap: hardware concurrency, clamped by SOLITON_FORGE_THREADS.
int thread_cap();

/// Run fn(i) for i in [0, count), possibly on several threads. The caller
/// must make fn(i) independent of fn(j); exceptions are rethrown.
void parallel_for_indices(int count, const std::function<void(int)>& fn);

}  // namespace sf
