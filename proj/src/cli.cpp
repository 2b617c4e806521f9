#include "solitonforge/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "solitonforge/report.hpp"
#include "solitonforge/spec_io.hpp"
#include "solitonforge/version.hpp"

namespace sf {

namespace {

class usage_error : public engine_error {
public:
    using engine_error::engine_error;
};

const char* usage_text =
    "usage: soliton-forge <command> <spec.json> [options]\n"
    "\n"
    "commands:\n"
    "  check           residuals of the defining soliton equation(s) plus the\n"
    "                  curvature symmetry suite over the sampling box\n"
    "  identities      the full identity catalog for the spec's soliton kind\n"
    "  classify        classify the potential vector field\n"
    "  recover-lambda  recover the soliton function from the field\n"
    "  curvature       print curvature tensor components at a point\n"
    "\n"
    "options:\n"
    "  --kind riemann|ricci   override the spec's soliton kind\n"
    "  --tol <float>          pass tolerance for all checks (default 1e-8)\n"
    "  --at x,y,...           evaluate at one point instead of sampling\n"
    "  --json <path>          also write the JSON report ('-' = stdout only)\n"
    "  --order 2|3            frame derivative order (default 3)\n"
    "  --tensor <name>        curvature command: riemann|ricci|scalar|weyl|conharmonic\n"
    "  --help                 show this text\n";

struct cli_options {
    std::string command;
    std::string spec_path;
    std::optional<soliton_kind> kind_override;
    double tol = 1e-8;
    std::optional<std::vector<double>> at;
    std::optional<std::string> json_path;
    int order = 3;
    std::string tensor;
    bool help = false;
};

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> point;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos);
        char* tail = nullptr;
        double v = std::strtod(item.c_str(), &tail);
        if (item.empty() || tail != item.c_str() + item.size() || !std::isfinite(v))
            throw usage_error("invalid coordinate '" + item + "' in --at");
        point.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return point;
}

cli_options parse_args(std::span<const std::string> args) {
    cli_options opt;
    if (args.empty()) throw usage_error("missing command");
    std::size_t i = 0;
    for (; i < args.size(); ++i) {
        const std::string& arg = args[i];
        if (arg == "--help" || arg == "-h") {
            opt.help = true;
            return opt;
        }
        auto value = [&](const char* flag) -> const std::string& {
            if (i + 1 >= args.size())
                throw usage_error(std::string(flag) + " needs a value");
            return args[++i];
        };
        if (arg == "--kind") {
            const std::string& v = value("--kind");
            if (v == "riemann")
                opt.kind_override = soliton_kind::riemann;
            else if (v == "ricci")
                opt.kind_override = soliton_kind::ricci;
            else
                throw usage_error("--kind must be riemann or ricci");
        } else if (arg == "--tol") {
            const std::string& v = value("--tol");
            char* tail = nullptr;
            opt.tol = std::strtod(v.c_str(), &tail);
            if (tail != v.c_str() + v.size() || !(opt.tol > 0.0))
                throw usage_error("--tol needs a positive number");
        } else if (arg == "--at") {
            opt.at = parse_point(value("--at"));
        } else if (arg == "--json") {
            opt.json_path = value("--json");
        } else if (arg == "--order") {
            const std::string& v = value("--order");
            if (v == "2")
                opt.order = 2;
            else if (v == "3")
                opt.order = 3;
            else
                throw usage_error("--order must be 2 or 3");
        } else if (arg == "--tensor") {
            opt.tensor = value("--tensor");
        } else if (!arg.empty() && arg[0] == '-') {
            throw usage_error("unknown option '" + arg + "'");
        } else if (opt.command.empty()) {
            opt.command = arg;
        } else if (opt.spec_path.empty()) {
            opt.spec_path = arg;
        } else {
            throw usage_error("unexpected argument '" + arg + "'");
        }
    }
    if (opt.command.empty()) throw usage_error("missing command");
    if (opt.spec_path.empty()) throw usage_error("missing spec file path");
    return opt;
}

soliton_input assemble_input(const spec_file& spec, const cli_options& opt) {
    if (!spec.field)
        throw schema_error("this command needs a vector_field in the spec",
                           "/vector_field");
    soliton_input in;
    in.manifold = spec.manifold;
    in.vector_field = *spec.field;
    if (opt.kind_override)
        in.kind = *opt.kind_override;
    else if (spec.kind)
        in.kind = *spec.kind;
    else
        throw schema_error("the spec has no soliton block (or pass --kind)", "/soliton");
    in.lambda = spec.lambda;
    return in;
}

struct sampled_points {
    std::vector<std::vector<double>> points;
    std::vector<exclusion_record> exclusions;
};

sampled_points gather_points(const spec_file& spec, const cli_options& opt) {
    sampled_points out;
    if (opt.at) {
        if (static_cast<int>(opt.at->size()) != spec.manifold.dimension)
            throw usage_error("--at needs one coordinate per dimension");
        out.points.push_back(*opt.at);
        return out;
    }
    point_validator validator = [&](std::span<const double> p) -> std::optional<std::string> {
        try {
            point_frame f = frame_at(spec.manifold, p, opt.order);
            if (spec.field) {
                std::vector<jet> v = evaluate_vector_field(f, *spec.field);
                if (metric_norm2(f, v).value() <= 1e-12)
                    return "the potential field vanishes";
                if (spec.field->potential) evaluate(*spec.field->potential, f.seeds());
            }
            if (spec.lambda) evaluate(*spec.lambda, f.seeds());
        } catch (const engine_error& e) {
            return std::string(e.what());
        }
        return std::nullopt;
    };
    sample_set set = sample_box(spec.manifold.box, spec.sample_count, spec.seed, validator);
    if (set.points.empty())
        throw domain_error("every sample point was excluded from the box");
    out.points = std::move(set.points);
    out.exclusions = std::move(set.exclusions);
    return out;
}

int status_of(const std::vector<check_record>& checks) {
    for (const auto& r : checks)
        if (!r.skipped && !r.pass) return 1;
    return 0;
}

check_record value_record(std::string name, double value,
                          std::span<const double> point, std::string reason) {
    check_record r;
    r.name = std::move(name);
    r.residual = value;
    r.tolerance = 0.0;
    r.pass = true;
    r.worst_point.assign(point.begin(), point.end());
    r.reason = std::move(reason);
    return r;
}

std::string slot_label(const point_frame& f, std::span<const int> idx, int upper_slots) {
    std::string out = "[";
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out += (static_cast<int>(i) == upper_slots ? "|" : ",");
        out += f.coordinate_names()[idx[i]];
    }
    out += "]";
    return out;
}

void curvature_records(const spec_file& spec, const cli_options& opt,
                       report_document& doc) {
    static const char* tensors[] = {"riemann", "ricci", "scalar", "weyl", "conharmonic"};
    bool known = false;
    for (const char* t : tensors) known = known || opt.tensor == t;
    if (!known)
        throw usage_error("--tensor must be riemann, ricci, scalar, weyl or conharmonic");
    if (!opt.at) throw usage_error("curvature needs --at");
    point_frame f = frame_at(spec.manifold, *opt.at, opt.order);
    const int n = f.dim();
    auto point = f.point();

    auto emit_rank4 = [&](const tensor_value& t, const std::string& prefix,
                          int upper_slots) {
        const double mag = t.max_abs();
        doc.checks.push_back(value_record(prefix + ".max_abs", mag, point,
                                          "largest absolute component"));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        double v = t.at({a, b, c, d});
                        if (std::abs(v) <= 1e-13 * std::max(1.0, mag)) continue;
                        int idx[4] = {a, b, c, d};
                        doc.checks.push_back(value_record(
                            prefix + slot_label(f, idx, upper_slots), v, point,
                            "component value"));
                    }
    };

    if (opt.tensor == "riemann") {
        emit_rank4(riemann(f), "R", 0);
    } else if (opt.tensor == "weyl") {
        emit_rank4(weyl_conharmonic(f).weyl, "W", 0);
    } else if (opt.tensor == "conharmonic") {
        emit_rank4(weyl_conharmonic(f).conharmonic, "H", 1);
    } else if (opt.tensor == "ricci") {
        ricci_result r = ricci_scalar(f);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int idx[2] = {i, j};
                doc.checks.push_back(value_record("Ric" + slot_label(f, idx, 0),
                                                  r.ricci.at({i, j}), point,
                                                  "component value"));
            }
        doc.checks.push_back(value_record("scal", r.scalar, point, "scalar curvature"));
    } else {  // scalar
        doc.checks.push_back(
            value_record("scal", ricci_scalar(f).scalar, point, "scalar curvature"));
    }
}

void recover_records(const spec_file& spec, const cli_options& opt,
                     const sampled_points& pts, report_document& doc, std::ostream& out) {
    soliton_input in = assemble_input(spec, opt);
    check_report merged;
    bool first = true;
    for (const auto& p : pts.points) {
        point_analysis pa = analyze_point(in, p, opt.order);
        lambda_recovery rec = in.kind == soliton_kind::riemann
                                  ? recover_lambda_riemann(pa, opt.tol)
                                  : recover_lambda_ricci(pa, opt.tol);
        if (first) {
            doc.checks.push_back(value_record(
                "recover.lambda", rec.lambda, p,
                rec.gradient_ok ? "recovered soliton function"
                                : "recovered; warning: the gradient hypothesis fails "
                                  "(curl residual " +
                                      json_number(rec.gradient_residual) + ")"));
            doc.checks.push_back(value_record("recover.norm2_v", rec.norm2, p, "|V|^2"));
            doc.checks.push_back(
                value_record("recover.v_norm2_rate", rec.norm2_rate, p, "V(|V|^2)"));
            doc.checks.push_back(value_record("recover.laplacian_norm2",
                                              rec.laplacian_norm2, p,
                                              "laplacian of |V|^2"));
            doc.checks.push_back(
                value_record("recover.nabla_v_norm2", rec.nabla_norm2, p, "|nabla V|^2"));
            doc.checks.push_back(value_record("recover.div_v", rec.div_v, p, "div V"));
            doc.checks.push_back(
                value_record("recover.v_div_v_rate", rec.div_rate, p, "V(div V)"));
            if (opt.at) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%.12g", rec.lambda);
                out << "recovered lambda = " << buf << "\n";
                auto line = [&](const char* label, double v) {
                    std::snprintf(buf, sizeof(buf), "%.12g", v);
                    out << "  " << label << " = " << buf << "\n";
                };
                line("|V|^2", rec.norm2);
                line("V(|V|^2)", rec.norm2_rate);
                line("laplacian(|V|^2)", rec.laplacian_norm2);
                line("|nabla V|^2", rec.nabla_norm2);
                line("div(V)", rec.div_v);
                line("V(div(V))", rec.div_rate);
                if (!rec.gradient_ok)
                    out << "  warning: V is not a gradient field (curl residual "
                        << rec.gradient_residual << "); the recovery hypothesis is unmet\n";
            }
            first = false;
        }
        if (spec.lambda) {
            double expected = evaluate(*spec.lambda, pa.frame.seeds()).value();
            check_report one;
            check_record r;
            r.name = "lambda.recovery";
            r.residual = std::abs(rec.lambda - expected) /
                         std::max(1.0, std::abs(expected));
            r.tolerance = opt.tol;
            r.pass = r.residual <= opt.tol;
            r.worst_point = p;
            one.add(r);
            merged.merge(one);
        }
    }
    for (auto& r : merged.records) doc.checks.push_back(r);
}

int run_command(const cli_options& opt, std::ostream& out, std::ostream& err) {
    (void)err;
    spec_file spec = load_spec(opt.spec_path);

    report_document doc;
    doc.spec_name = spec.name;
    doc.version = engine_version;
    doc.command = opt.command;

    if (opt.command == "curvature") {
        curvature_records(spec, opt, doc);
    } else {
        sampled_points pts = gather_points(spec, opt);
        doc.exclusions = pts.exclusions;
        if (opt.command == "check") {
            soliton_input in = assemble_input(spec, opt);
            doc.checks = run_soliton_checks(in, pts.points, opt.tol, opt.order).records;
            doc.classification =
                classify_vector_field(in, pts.points, opt.tol, opt.order);
        } else if (opt.command == "identities") {
            soliton_input in = assemble_input(spec, opt);
            doc.checks = run_identity_catalog(in, pts.points, opt.tol, opt.order).records;
            doc.classification =
                classify_vector_field(in, pts.points, opt.tol, opt.order);
        } else if (opt.command == "classify") {
            if (!spec.field)
                throw schema_error("classify needs a vector_field in the spec",
                                   "/vector_field");
            soliton_input in;
            in.manifold = spec.manifold;
            in.vector_field = *spec.field;
            in.kind = opt.kind_override.value_or(spec.kind.value_or(soliton_kind::riemann));
            in.lambda = spec.lambda;
            doc.classification =
                classify_vector_field(in, pts.points, opt.tol, opt.order);
        } else if (opt.command == "recover-lambda") {
            recover_records(spec, opt, pts, doc, out);
        } else {
            throw usage_error("unknown command '" + opt.command + "'");
        }
    }

    doc.status = status_of(doc.checks);

    const bool json_to_stdout = opt.json_path && *opt.json_path == "-";
    if (json_to_stdout) {
        emit_report(doc, report_format::json, out);
    } else {
        emit_report(doc, report_format::text, out);
        if (opt.json_path) {
            std::ofstream file(*opt.json_path, std::ios::binary);
            if (!file) throw io_error("cannot open '" + *opt.json_path + "' for writing");
            emit_report(doc, report_format::json, file);
            if (!file) throw io_error("failed writing '" + *opt.json_path + "'");
        }
    }
    return doc.status;
}

}  // namespace

int cli_run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    try {
        cli_options opt = parse_args(args);
        if (opt.help) {
            out << usage_text;
            return 0;
        }
        return run_command(opt, out, err);
    } catch (const usage_error& e) {
        err << "usage error: " << e.what() << "\n\n" << usage_text;
        return 2;
    } catch (const syntax_error& e) {
        err << "expression error: " << e.what() << "\n";
        return 2;
    } catch (const unknown_identifier& e) {
        err << "expression error: " << e.what() << "\n";
        return 2;
    } catch (const schema_error& e) {
        err << "spec error: " << e.what() << "\n";
        return 2;
    } catch (const io_error& e) {
        err << "io error: " << e.what() << "\n";
        return 2;
    } catch (const missing_lambda& e) {
        err << "spec error: " << e.what() << "\n";
        return 2;
    } catch (const dimension_error& e) {
        err << "spec error: " << e.what() << "\n";
        return 2;
    } catch (const order_error& e) {
        err << "order error: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        err << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const singular_metric& e) {
        err << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const not_positive_definite& e) {
        err << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const zero_vector_field& e) {
        err << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace sf
