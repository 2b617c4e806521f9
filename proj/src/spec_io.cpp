#include "solitonforge/spec_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sf {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& pointer) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw schema_error("unknown key '" + it.key() + "'", pointer + "/" + it.key());
    }
}

const json& require_key(const json& obj, const char* key, const std::string& pointer) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw schema_error(std::string("missing required key '") + key + "'",
                           pointer + "/" + key);
    return *it;
}

std::string require_string(const json& v, const std::string& pointer) {
    if (!v.is_string()) throw schema_error("expected a string", pointer);
    return v.get<std::string>();
}

int require_int(const json& v, const std::string& pointer) {
    if (!v.is_number_integer())
        throw schema_error("expected an integer", pointer);
    return v.get<int>();
}

double require_number(const json& v, const std::string& pointer) {
    if (!v.is_number()) throw schema_error("expected a number", pointer);
    return v.get<double>();
}

expr_ast parse_field_expr(const std::string& text, const chart_manifold& m,
                          const std::string& pointer) {
    try {
        return parse(text, m.coordinates);
    } catch (const syntax_error& e) {
        throw syntax_error(pointer + ": " + e.what(), e.offset());
    } catch (const unknown_identifier& e) {
        throw unknown_identifier(e.token(), e.offset());
    }
}

}  // namespace

soliton_input spec_file::input() const {
    if (!has_soliton())
        throw schema_error("the spec file has no soliton block", "/soliton");
    soliton_input in;
    in.manifold = manifold;
    in.vector_field = *field;
    in.kind = *kind;
    in.lambda = lambda;
    return in;
}

spec_file parse_spec_json(const std::string& bytes, const std::string& fallback_name) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw schema_error(std::string("invalid JSON: ") + e.what(), "/");
    }
    if (!doc.is_object()) throw schema_error("spec must be a JSON object", "/");
    reject_unknown_keys(doc, {"name", "dimension", "coordinates", "metric", "vector_field",
                              "soliton", "sampling"},
                        "");

    spec_file spec;
    spec.name = doc.contains("name") ? require_string(doc["name"], "/name") : fallback_name;

    const int dimension = require_int(require_key(doc, "dimension", ""), "/dimension");
    if (dimension < 2) throw schema_error("dimension must be at least 2", "/dimension");

    const json& jcoords = require_key(doc, "coordinates", "");
    if (!jcoords.is_array())
        throw schema_error("coordinates must be an array of names", "/coordinates");
    std::vector<std::string> coordinates;
    for (std::size_t i = 0; i < jcoords.size(); ++i)
        coordinates.push_back(
            require_string(jcoords[i], "/coordinates/" + std::to_string(i)));

    const json& jmetric = require_key(doc, "metric", "");
    if (!jmetric.is_array()) throw schema_error("metric must be an array of rows", "/metric");
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < jmetric.size(); ++i) {
        const json& jrow = jmetric[i];
        if (!jrow.is_array())
            throw schema_error("metric row must be an array", "/metric/" + std::to_string(i));
        std::vector<std::string> row;
        for (std::size_t j = 0; j < jrow.size(); ++j)
            row.push_back(require_string(
                jrow[j], "/metric/" + std::to_string(i) + "/" + std::to_string(j)));
        rows.push_back(std::move(row));
    }

    const json& jsampling = require_key(doc, "sampling", "");
    if (!jsampling.is_object())
        throw schema_error("sampling must be an object", "/sampling");
    reject_unknown_keys(jsampling, {"box", "count", "seed"}, "/sampling");
    const json& jbox = require_key(jsampling, "box", "/sampling");
    if (!jbox.is_object())
        throw schema_error("sampling box must map coordinates to intervals",
                           "/sampling/box");
    std::vector<interval> box(coordinates.size());
    std::vector<bool> seen(coordinates.size(), false);
    for (auto it = jbox.begin(); it != jbox.end(); ++it) {
        int index = -1;
        for (std::size_t i = 0; i < coordinates.size(); ++i)
            if (coordinates[i] == it.key()) index = static_cast<int>(i);
        if (index < 0)
            throw schema_error("box key '" + it.key() + "' is not a coordinate",
                               "/sampling/box/" + it.key());
        const json& jiv = *it;
        if (!jiv.is_array() || jiv.size() != 2)
            throw schema_error("interval must be [lo, hi]", "/sampling/box/" + it.key());
        box[index].lo = require_number(jiv[0], "/sampling/box/" + it.key() + "/0");
        box[index].hi = require_number(jiv[1], "/sampling/box/" + it.key() + "/1");
        seen[index] = true;
    }
    for (std::size_t i = 0; i < coordinates.size(); ++i)
        if (!seen[i])
            throw schema_error("box is missing coordinate '" + coordinates[i] + "'",
                               "/sampling/box");

    spec.sample_count = require_int(require_key(jsampling, "count", "/sampling"),
                                    "/sampling/count");
    if (spec.sample_count < 1)
        throw schema_error("count must be at least 1", "/sampling/count");
    const json& jseed = require_key(jsampling, "seed", "/sampling");
    if (!jseed.is_number_integer() ||
        (jseed.is_number_integer() && !jseed.is_number_unsigned() && jseed.get<long long>() < 0))
        throw schema_error("seed must be a non-negative integer", "/sampling/seed");
    spec.seed = jseed.get<std::uint64_t>();

    spec.manifold = chart_manifold::from_strings(dimension, coordinates, rows,
                                                 std::move(box));

    if (doc.contains("vector_field")) {
        const json& jfield = doc["vector_field"];
        if (!jfield.is_object())
            throw schema_error("vector_field must be an object", "/vector_field");
        reject_unknown_keys(jfield, {"components", "potential"}, "/vector_field");
        const json& jcomp = require_key(jfield, "components", "/vector_field");
        if (!jcomp.is_array() || static_cast<int>(jcomp.size()) != dimension)
            throw schema_error("components must list one expression per coordinate",
                               "/vector_field/components");
        vector_field_spec field;
        for (std::size_t i = 0; i < jcomp.size(); ++i) {
            std::string pointer = "/vector_field/components/" + std::to_string(i);
            field.components.push_back(parse_field_expr(
                require_string(jcomp[i], pointer), spec.manifold, pointer));
        }
        if (jfield.contains("potential"))
            field.potential = parse_field_expr(
                require_string(jfield["potential"], "/vector_field/potential"),
                spec.manifold, "/vector_field/potential");
        spec.field = std::move(field);
    }

    if (doc.contains("soliton")) {
        const json& jsoliton = doc["soliton"];
        if (!jsoliton.is_object())
            throw schema_error("soliton must be an object", "/soliton");
        reject_unknown_keys(jsoliton, {"kind", "lambda"}, "/soliton");
        std::string kind = require_string(require_key(jsoliton, "kind", "/soliton"),
                                          "/soliton/kind");
        if (kind == "riemann")
            spec.kind = soliton_kind::riemann;
        else if (kind == "ricci")
            spec.kind = soliton_kind::ricci;
        else
            throw schema_error("kind must be 'riemann' or 'ricci'", "/soliton/kind");
        if (dimension < 3)
            throw schema_error("the soliton suite requires dimension >= 3", "/dimension");
        if (!spec.field)
            throw schema_error("a soliton block needs a vector_field", "/vector_field");
        if (jsoliton.contains("lambda"))
            spec.lambda = parse_field_expr(
                require_string(jsoliton["lambda"], "/soliton/lambda"), spec.manifold,
                "/soliton/lambda");
    }

    return spec;
}

spec_file load_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open spec file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw io_error("failed reading spec file '" + path + "'");

    std::string name = path;
    if (auto slash = name.find_last_of("/\\"); slash != std::string::npos)
        name = name.substr(slash + 1);
    if (auto dot = name.rfind(".json"); dot != std::string::npos && dot == name.size() - 5)
        name = name.substr(0, dot);
    return parse_spec_json(buffer.str(), name);
}

}  // namespace sf
