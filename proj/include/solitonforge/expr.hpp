#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solitonforge/jet.hpp"

namespace sf {

enum class expr_kind : std::uint8_t {
    number,
    variable,
    negate,
    add,
    subtract,
    multiply,
    divide,
    power,
    call,
};

enum class expr_fn : std::uint8_t { exp, log, sin, cos, sinh, cosh, sqrt };

const char* name_of(expr_fn fn);

struct expr_node;
using expr_node_ptr = std::shared_ptr<const expr_node>;

struct expr_node {
    expr_kind kind;
    double number = 0.0;
    std::string name;    // variable nodes
    int var_index = -1;  // slot in the declared coordinate list
    expr_fn fn = expr_fn::exp;
    std::vector<expr_node_ptr> children;
    std::uint32_t src_begin = 0;  // byte span in the source text, when parsed
    std::uint32_t src_end = 0;
};

/// Parsed scalar expression over a fixed coordinate list. Immutable after
/// construction and cheap to copy (nodes are shared).
class expr_ast {
public:
    expr_ast() = default;
    expr_ast(expr_node_ptr root, std::shared_ptr<const std::vector<std::string>> coords,
             std::string source)
        : root_(std::move(root)), coords_(std::move(coords)), source_(std::move(source)) {}

    bool empty() const { return root_ == nullptr; }
    const expr_node_ptr& root() const { return root_; }
    const std::vector<std::string>& coordinates() const { return *coords_; }
    std::shared_ptr<const std::vector<std::string>> coordinates_ptr() const { return coords_; }
    const std::string& source() const { return source_; }

private:
    expr_node_ptr root_;
    std::shared_ptr<const std::vector<std::string>> coords_;
    std::string source_;
};

/// Grammar: '^' binds tightest (right-associative, unary-level right operand),
/// then unary minus, then '*'/'/', then '+'/'-'; parentheses; decimal
/// literals with optional exponent; identifiers are declared coordinates or
/// the function names exp, log, sin, cos, sinh, cosh, sqrt. Whitespace is
/// insignificant. There is no implicit multiplication.
expr_ast parse(std::string_view text,
               std::shared_ptr<const std::vector<std::string>> coordinates);
expr_ast parse(std::string_view text, std::span<const std::string> coordinates);

/// Evaluate over jet arithmetic with one jet per declared coordinate.
jet evaluate(const expr_ast& ast, std::span<const jet> coordinate_jets);
/// Environment-keyed variant; every free variable must be bound.
jet evaluate(const expr_ast& ast, const std::map<std::string, jet>& env);

/// Plain double evaluation (independent of the jet path; used by oracles).
double evaluate_value(const expr_ast& ast, std::span<const double> point);

std::set<std::string> free_variables(const expr_ast& ast);

/// Minimal-parenthesis rendering; reparsing yields a structurally identical
/// tree.
std::string to_string(const expr_ast& ast);

bool structurally_equal(const expr_ast& a, const expr_ast& b);

}  // namespace sf
