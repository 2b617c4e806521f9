#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "solitonforge/soliton.hpp"

namespace sf {

/// A verification job loaded from a spec file: the chart, an optional
/// potential vector field with an optional soliton block, and the sampling
/// plan. Expressions are parsed eagerly at load time.
struct spec_file {
    std::string name;
    chart_manifold manifold;
    std::optional<vector_field_spec> field;
    std::optional<soliton_kind> kind;
    std::optional<expr_ast> lambda;
    int sample_count = 0;
    std::uint64_t seed = 0;

    bool has_soliton() const { return kind.has_value(); }
    /// Assemble the soliton input; requires a soliton block.
    soliton_input input() const;
};

spec_file parse_spec_json(const std::string& bytes, const std::string& fallback_name);
spec_file load_spec(const std::string& path);

}  // namespace sf
