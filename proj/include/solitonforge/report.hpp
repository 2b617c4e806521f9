#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "solitonforge/sampling.hpp"
#include "solitonforge/soliton.hpp"

namespace sf {

/// The result of one CLI run. JSON serialization is byte-stable for a fixed
/// (spec bytes, command, flags): fixed key order, doubles printed with 17
/// significant digits.
struct report_document {
    std::string spec_name;
    std::string version;
    std::string command;
    std::vector<check_record> checks;
    std::optional<classification_report> classification;
    std::vector<exclusion_record> exclusions;
    int status = 0;
};

enum class report_format { text, json };

std::string render_report(const report_document& doc, report_format format);
void emit_report(const report_document& doc, report_format format, std::ostream& out);

/// 17-significant-digit float formatting used by the JSON emitter.
std::string json_number(double v);

}  // namespace sf
