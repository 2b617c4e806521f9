#include "solitonforge/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sf {

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void write_point(std::ostringstream& os, const std::vector<double>& p) {
    os << "[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) os << ",";
        os << json_number(p[i]);
    }
    os << "]";
}

void write_doubles(std::ostringstream& os, const std::vector<double>& v) {
    write_point(os, v);
}

std::string render_json(const report_document& doc) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"spec\": \"" << json_escape(doc.spec_name) << "\",\n";
    os << "  \"version\": \"" << json_escape(doc.version) << "\",\n";
    os << "  \"checks\": [";
    for (std::size_t i = 0; i < doc.checks.size(); ++i) {
        const check_record& r = doc.checks[i];
        os << (i ? ",\n    " : "\n    ");
        os << "{\"name\": \"" << json_escape(r.name) << "\", \"residual\": "
           << json_number(r.residual) << ", \"tolerance\": " << json_number(r.tolerance)
           << ", \"pass\": " << (r.pass ? "true" : "false") << ", \"worst_point\": ";
        write_point(os, r.worst_point);
        os << ", \"skipped\": " << (r.skipped ? "true" : "false") << ", \"reason\": \""
           << json_escape(r.reason) << "\"}";
    }
    os << (doc.checks.empty() ? "],\n" : "\n  ],\n");
    os << "  \"classification\": ";
    os << "{\"available\": "
       << (doc.classification ? "true" : "false");
    if (doc.classification) {
        const classification_report& c = *doc.classification;
        os << ", \"samples\": " << c.samples;
        os << ", \"tolerance\": " << json_number(c.tolerance);
        os << ", \"is_gradient\": " << (c.is_gradient ? "true" : "false");
        os << ", \"gradient_residual\": " << json_number(c.gradient_residual);
        os << ", \"has_potential\": " << (c.has_potential ? "true" : "false");
        os << ", \"potential_matches\": " << (c.potential_matches ? "true" : "false");
        os << ", \"potential_residual\": " << json_number(c.potential_residual);
        os << ", \"is_solenoidal\": " << (c.is_solenoidal ? "true" : "false");
        os << ", \"solenoidal_residual\": " << json_number(c.solenoidal_residual);
        os << ", \"is_torse_forming\": " << (c.is_torse_forming ? "true" : "false");
        os << ", \"torse_residual\": " << json_number(c.torse_residual);
        os << ", \"is_concircular\": " << (c.is_concircular ? "true" : "false");
        os << ", \"psi_residual\": " << json_number(c.psi_residual);
        os << ", \"constant_length\": " << (c.constant_length ? "true" : "false");
        os << ", \"length_rate\": " << json_number(c.length_rate);
        os << ", \"concircular_grad_residual\": "
           << json_number(c.concircular_grad_residual);
        os << ", \"concircular_div_residual\": "
           << json_number(c.concircular_div_residual);
        os << ", \"a_values\": ";
        write_doubles(os, c.a_values);
        os << ", \"psi_norms\": ";
        write_doubles(os, c.psi_norms);
    }
    os << ", \"excluded\": [";
    for (std::size_t i = 0; i < doc.exclusions.size(); ++i) {
        const exclusion_record& e = doc.exclusions[i];
        os << (i ? "," : "") << "{\"index\": " << e.sample_index << ", \"point\": ";
        write_point(os, e.last_point);
        os << ", \"reason\": \"" << json_escape(e.reason) << "\"}";
    }
    os << "]},\n";
    os << "  \"status\": " << doc.status << "\n";
    os << "}\n";
    return os.str();
}

std::string format_point(const std::vector<double>& p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", p[i]);
        os << (i ? ", " : "") << buf;
    }
    os << ")";
    return os.str();
}

std::string render_text(const report_document& doc) {
    std::ostringstream os;
    os << "spec: " << doc.spec_name << "   engine: " << doc.version
       << "   command: " << doc.command << "\n";

    if (!doc.checks.empty()) {
        std::size_t name_width = 5;
        for (const auto& r : doc.checks) name_width = std::max(name_width, r.name.size());
        os << "\ncheck" << std::string(name_width - 5, ' ')
           << "   residual     tolerance    status   worst point\n";
        for (const auto& r : doc.checks) {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "   %-10.3e   %-10.3e   %-6s   ", r.residual,
                          r.tolerance, r.skipped ? "skip" : (r.pass ? "pass" : "FAIL"));
            os << r.name << std::string(name_width - r.name.size(), ' ') << buf
               << format_point(r.worst_point);
            if (!r.reason.empty()) os << "   [" << r.reason << "]";
            os << "\n";
        }
    }

    if (doc.classification) {
        const classification_report& c = *doc.classification;
        auto flag = [](bool b) { return b ? "yes" : "no"; };
        auto resid = [](double v) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.3e", v);
            return std::string(buf);
        };
        os << "\nclassification over " << c.samples << " samples (tolerance "
           << c.tolerance << "):\n";
        os << "  gradient: " << flag(c.is_gradient) << " (residual "
           << resid(c.gradient_residual) << ")";
        if (c.has_potential)
            os << (c.potential_matches ? ", potential matches" : ", potential MISMATCH");
        os << "\n";
        os << "  solenoidal: " << flag(c.is_solenoidal) << " (residual "
           << resid(c.solenoidal_residual) << ")\n";
        os << "  torse-forming: " << flag(c.is_torse_forming) << " (residual "
           << resid(c.torse_residual) << ")\n";
        os << "  concircular: " << flag(c.is_concircular) << " (psi "
           << resid(c.psi_residual) << ")\n";
        os << "  constant length: " << flag(c.constant_length) << " (rate "
           << resid(c.length_rate) << ")\n";
        if (!c.a_values.empty()) {
            os << "  a values:";
            for (double a : c.a_values) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), " %.6g", a);
                os << buf;
            }
            os << "\n";
        }
    }

    if (!doc.exclusions.empty()) {
        os << "\nexcluded sample points:\n";
        for (const auto& e : doc.exclusions)
            os << "  sample " << e.sample_index << " at " << format_point(e.last_point)
               << ": " << e.reason << "\n";
    }

    os << "\nstatus: " << doc.status << "\n";
    return os.str();
}

}  // namespace

std::string json_number(double v) {
    if (!std::isfinite(v)) throw engine_error("non-finite value in report");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string render_report(const report_document& doc, report_format format) {
    return format == report_format::json ? render_json(doc) : render_text(doc);
}

void emit_report(const report_document& doc, report_format format, std::ostream& out) {
    out << render_report(doc, format);
    if (!out) throw io_error("failed writing the report");
}

}  // namespace sf
