#include "solitonforge/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace sf {

namespace {

const std::pair<const char*, expr_fn> k_functions[] = {
    {"exp", expr_fn::exp},   {"log", expr_fn::log},   {"sin", expr_fn::sin},
    {"cos", expr_fn::cos},   {"sinh", expr_fn::sinh}, {"cosh", expr_fn::cosh},
    {"sqrt", expr_fn::sqrt},
};

bool lookup_function(std::string_view name, expr_fn& out) {
    for (const auto& [fname, fn] : k_functions) {
        if (name == fname) {
            out = fn;
            return true;
        }
    }
    return false;
}

struct token {
    enum kind_t { number, ident, lparen, rparen, plus, minus, star, slash, caret, eof };
    kind_t kind;
    std::size_t begin;
    std::size_t end;
    double value = 0.0;     // number tokens
    std::string text;       // ident tokens
};

class lexer {
public:
    explicit lexer(std::string_view text) : text_(text) { advance(); }

    const token& peek() const { return current_; }
    token take() {
        token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        current_.begin = pos_;
        if (pos_ >= text_.size()) {
            current_.kind = token::eof;
            current_.end = pos_;
            return;
        }
        const char c = text_[pos_];
        switch (c) {
            case '(': single(token::lparen); return;
            case ')': single(token::rparen); return;
            case '+': single(token::plus); return;
            case '-': single(token::minus); return;
            case '*': single(token::star); return;
            case '/': single(token::slash); return;
            case '^': single(token::caret); return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            current_.kind = token::ident;
            current_.end = pos_;
            current_.text.assign(text_.substr(start, pos_ - start));
            return;
        }
        throw syntax_error(std::string("unexpected character '") + c + "'", pos_);
    }

    void single(token::kind_t kind) {
        current_.kind = kind;
        current_.end = ++pos_;
    }

    void lex_number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                throw syntax_error("expected digits after decimal point", pos_);
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark;  // the 'e' belongs to the next token
            }
        }
        std::string lit(text_.substr(start, pos_ - start));
        char* tail = nullptr;
        const double v = std::strtod(lit.c_str(), &tail);
        if (tail != lit.c_str() + lit.size() || !std::isfinite(v))
            throw syntax_error("invalid numeric literal '" + lit + "'", start);
        current_.kind = token::number;
        current_.end = pos_;
        current_.value = v;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    token current_;
};

class parser {
public:
    parser(std::string_view text, std::shared_ptr<const std::vector<std::string>> coords)
        : lex_(text), coords_(std::move(coords)) {}

    expr_node_ptr run() {
        expr_node_ptr root = expression();
        const token& t = lex_.peek();
        if (t.kind != token::eof)
            throw syntax_error("unexpected trailing input", t.begin);
        return root;
    }

private:
    expr_node_ptr expression() {
        expr_node_ptr lhs = term();
        for (;;) {
            const token& t = lex_.peek();
            if (t.kind == token::plus || t.kind == token::minus) {
                token op = lex_.take();
                expr_node_ptr rhs = term();
                lhs = binary(op.kind == token::plus ? expr_kind::add : expr_kind::subtract,
                             lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    expr_node_ptr term() {
        expr_node_ptr lhs = unary();
        for (;;) {
            const token& t = lex_.peek();
            if (t.kind == token::star || t.kind == token::slash) {
                token op = lex_.take();
                expr_node_ptr rhs = unary();
                lhs = binary(op.kind == token::star ? expr_kind::multiply : expr_kind::divide,
                             lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    expr_node_ptr unary() {
        const token& t = lex_.peek();
        if (t.kind == token::minus) {
            token op = lex_.take();
            expr_node_ptr child = unary();
            auto node = std::make_shared<expr_node>();
            node->kind = expr_kind::negate;
            node->children = {child};
            node->src_begin = static_cast<std::uint32_t>(op.begin);
            node->src_end = child->src_end;
            return node;
        }
        return power();
    }

    expr_node_ptr power() {
        expr_node_ptr base = primary();
        if (lex_.peek().kind == token::caret) {
            lex_.take();
            expr_node_ptr exponent = unary();  // right-associative
            return binary(expr_kind::power, base, exponent);
        }
        return base;
    }

    expr_node_ptr primary() {
        token t = lex_.take();
        switch (t.kind) {
            case token::number: {
                auto node = std::make_shared<expr_node>();
                node->kind = expr_kind::number;
                node->number = t.value;
                node->src_begin = static_cast<std::uint32_t>(t.begin);
                node->src_end = static_cast<std::uint32_t>(t.end);
                return node;
            }
            case token::ident: {
                expr_fn fn;
                if (lookup_function(t.text, fn)) {
                    const token& open = lex_.peek();
                    if (open.kind != token::lparen)
                        throw syntax_error("expected '(' after function name '" + t.text + "'",
                                           open.begin);
                    lex_.take();
                    expr_node_ptr arg = expression();
                    expect_rparen();
                    auto node = std::make_shared<expr_node>();
                    node->kind = expr_kind::call;
                    node->fn = fn;
                    node->children = {arg};
                    node->src_begin = static_cast<std::uint32_t>(t.begin);
                    node->src_end = arg->src_end + 1;
                    return node;
                }
                int index = coordinate_index(t.text);
                if (index < 0) throw unknown_identifier(t.text, t.begin);
                auto node = std::make_shared<expr_node>();
                node->kind = expr_kind::variable;
                node->name = t.text;
                node->var_index = index;
                node->src_begin = static_cast<std::uint32_t>(t.begin);
                node->src_end = static_cast<std::uint32_t>(t.end);
                return node;
            }
            case token::lparen: {
                expr_node_ptr inner = expression();
                expect_rparen();
                return inner;
            }
            default:
                throw syntax_error("expected an operand", t.begin);
        }
    }

    void expect_rparen() {
        const token& t = lex_.peek();
        if (t.kind != token::rparen) throw syntax_error("expected ')'", t.begin);
        lex_.take();
    }

    int coordinate_index(const std::string& name) const {
        for (std::size_t i = 0; i < coords_->size(); ++i)
            if ((*coords_)[i] == name) return static_cast<int>(i);
        return -1;
    }

    static expr_node_ptr binary(expr_kind kind, expr_node_ptr lhs, expr_node_ptr rhs) {
        auto node = std::make_shared<expr_node>();
        node->kind = kind;
        node->children = {std::move(lhs), std::move(rhs)};
        node->src_begin = node->children[0]->src_begin;
        node->src_end = node->children[1]->src_end;
        return node;
    }

    lexer lex_;
    std::shared_ptr<const std::vector<std::string>> coords_;
};

// Internal marker so a domain error is annotated with the innermost failing
// subexpression only.
class annotated_domain_error : public domain_error {
public:
    using domain_error::domain_error;
};

std::string node_to_string(const expr_node_ptr& node);

[[noreturn]] void annotate_and_throw(const domain_error& e, const expr_node_ptr& node,
                                     const std::string& source) {
    std::string text;
    if (node->src_end > node->src_begin && node->src_end <= source.size())
        text = source.substr(node->src_begin, node->src_end - node->src_begin);
    else
        text = node_to_string(node);
    throw annotated_domain_error(std::string(e.what()) + " in '" + text + "'");
}

jet eval_node(const expr_node_ptr& node, std::span<const jet> slots,
              const std::string& source) {
    switch (node->kind) {
        case expr_kind::number:
            return jet::constant_like(slots[0], node->number);
        case expr_kind::variable:
            return slots[node->var_index];
        case expr_kind::negate:
            return -eval_node(node->children[0], slots, source);
        case expr_kind::add:
            return eval_node(node->children[0], slots, source) +
                   eval_node(node->children[1], slots, source);
        case expr_kind::subtract:
            return eval_node(node->children[0], slots, source) -
                   eval_node(node->children[1], slots, source);
        case expr_kind::multiply:
            return eval_node(node->children[0], slots, source) *
                   eval_node(node->children[1], slots, source);
        case expr_kind::divide: {
            jet lhs = eval_node(node->children[0], slots, source);
            jet rhs = eval_node(node->children[1], slots, source);
            try {
                return lhs / rhs;
            } catch (const annotated_domain_error&) {
                throw;
            } catch (const domain_error& e) {
                annotate_and_throw(e, node, source);
            }
        }
        case expr_kind::power: {
            jet base = eval_node(node->children[0], slots, source);
            jet exponent = eval_node(node->children[1], slots, source);
            try {
                bool constant = true;
                auto coeffs = exponent.coefficients();
                for (std::size_t i = 1; i < coeffs.size(); ++i)
                    if (coeffs[i] != 0.0) {
                        constant = false;
                        break;
                    }
                if (constant) return pow(base, exponent.value());
                return exp(exponent * log(base));
            } catch (const annotated_domain_error&) {
                throw;
            } catch (const domain_error& e) {
                annotate_and_throw(e, node, source);
            }
        }
        case expr_kind::call: {
            jet arg = eval_node(node->children[0], slots, source);
            try {
                switch (node->fn) {
                    case expr_fn::exp: return exp(arg);
                    case expr_fn::log: return log(arg);
                    case expr_fn::sin: return sin(arg);
                    case expr_fn::cos: return cos(arg);
                    case expr_fn::sinh: return sinh(arg);
                    case expr_fn::cosh: return cosh(arg);
                    case expr_fn::sqrt: return sqrt(arg);
                }
                throw std::logic_error("unreachable call kind");
            } catch (const annotated_domain_error&) {
                throw;
            } catch (const domain_error& e) {
                annotate_and_throw(e, node, source);
            }
        }
    }
    throw std::logic_error("unreachable expression kind");
}

double eval_value_node(const expr_node_ptr& node, std::span<const double> point) {
    auto finite = [&](double v) {
        if (!std::isfinite(v)) throw domain_error("non-finite value in expression");
        return v;
    };
    switch (node->kind) {
        case expr_kind::number: return node->number;
        case expr_kind::variable: return point[node->var_index];
        case expr_kind::negate: return -eval_value_node(node->children[0], point);
        case expr_kind::add:
            return finite(eval_value_node(node->children[0], point) +
                          eval_value_node(node->children[1], point));
        case expr_kind::subtract:
            return finite(eval_value_node(node->children[0], point) -
                          eval_value_node(node->children[1], point));
        case expr_kind::multiply:
            return finite(eval_value_node(node->children[0], point) *
                          eval_value_node(node->children[1], point));
        case expr_kind::divide: {
            double denom = eval_value_node(node->children[1], point);
            if (denom == 0.0) throw domain_error("division by zero value");
            return finite(eval_value_node(node->children[0], point) / denom);
        }
        case expr_kind::power: {
            double base = eval_value_node(node->children[0], point);
            double p = eval_value_node(node->children[1], point);
            if (p != std::rint(p) && base <= 0.0)
                throw domain_error("non-integer power of a non-positive base");
            return finite(std::pow(base, p));
        }
        case expr_kind::call: {
            double a = eval_value_node(node->children[0], point);
            switch (node->fn) {
                case expr_fn::exp: return finite(std::exp(a));
                case expr_fn::log:
                    if (a <= 0.0) throw domain_error("log of a non-positive value");
                    return std::log(a);
                case expr_fn::sin: return std::sin(a);
                case expr_fn::cos: return std::cos(a);
                case expr_fn::sinh: return finite(std::sinh(a));
                case expr_fn::cosh: return finite(std::cosh(a));
                case expr_fn::sqrt:
                    if (a <= 0.0) throw domain_error("sqrt of a non-positive value");
                    return std::sqrt(a);
            }
            throw std::logic_error("unreachable call kind");
        }
    }
    throw std::logic_error("unreachable expression kind");
}

int precedence(const expr_node_ptr& node) {
    switch (node->kind) {
        case expr_kind::add:
        case expr_kind::subtract: return 1;
        case expr_kind::multiply:
        case expr_kind::divide: return 2;
        case expr_kind::negate: return 3;
        case expr_kind::power: return 4;
        default: return 5;
    }
}

void print_node(std::ostringstream& os, const expr_node_ptr& node, int min_prec) {
    const int prec = precedence(node);
    const bool parens = prec < min_prec;
    if (parens) os << "(";
    switch (node->kind) {
        case expr_kind::number: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", node->number);
            os << buf;
            break;
        }
        case expr_kind::variable:
            os << node->name;
            break;
        case expr_kind::negate:
            os << "-";
            print_node(os, node->children[0], 3);
            break;
        case expr_kind::add:
        case expr_kind::subtract:
            print_node(os, node->children[0], 1);
            os << (node->kind == expr_kind::add ? " + " : " - ");
            print_node(os, node->children[1], 2);
            break;
        case expr_kind::multiply:
        case expr_kind::divide:
            print_node(os, node->children[0], 2);
            os << (node->kind == expr_kind::multiply ? "*" : "/");
            print_node(os, node->children[1], 3);
            break;
        case expr_kind::power:
            print_node(os, node->children[0], 5);
            os << "^";
            print_node(os, node->children[1], 3);
            break;
        case expr_kind::call:
            os << name_of(node->fn) << "(";
            print_node(os, node->children[0], 0);
            os << ")";
            break;
    }
    if (parens) os << ")";
}

std::string node_to_string(const expr_node_ptr& node) {
    std::ostringstream os;
    print_node(os, node, 0);
    return os.str();
}

void collect_variables(const expr_node_ptr& node, std::set<std::string>& out) {
    if (node->kind == expr_kind::variable) out.insert(node->name);
    for (const auto& child : node->children) collect_variables(child, out);
}

}  // namespace

const char* name_of(expr_fn fn) {
    switch (fn) {
        case expr_fn::exp: return "exp";
        case expr_fn::log: return "log";
        case expr_fn::sin: return "sin";
        case expr_fn::cos: return "cos";
        case expr_fn::sinh: return "sinh";
        case expr_fn::cosh: return "cosh";
        case expr_fn::sqrt: return "sqrt";
    }
    return "?";
}

expr_ast parse(std::string_view text,
               std::shared_ptr<const std::vector<std::string>> coordinates) {
    if (text.empty()) throw syntax_error("empty expression", 0);
    parser p(text, coordinates);
    return expr_ast(p.run(), std::move(coordinates), std::string(text));
}

expr_ast parse(std::string_view text, std::span<const std::string> coordinates) {
    auto coords = std::make_shared<const std::vector<std::string>>(coordinates.begin(),
                                                                   coordinates.end());
    return parse(text, std::move(coords));
}

jet evaluate(const expr_ast& ast, std::span<const jet> coordinate_jets) {
    if (ast.empty()) throw std::invalid_argument("evaluate of an empty expression");
    if (coordinate_jets.empty())
        throw std::invalid_argument("evaluate needs at least one coordinate jet");
    if (coordinate_jets.size() != ast.coordinates().size())
        throw std::invalid_argument("coordinate jet count does not match the chart");
    return eval_node(ast.root(), coordinate_jets, ast.source());
}

jet evaluate(const expr_ast& ast, const std::map<std::string, jet>& env) {
    if (ast.empty()) throw std::invalid_argument("evaluate of an empty expression");
    const auto& coords = ast.coordinates();
    std::vector<jet> slots(coords.size());
    std::set<std::string> free = free_variables(ast);
    const jet* shape = nullptr;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        auto it = env.find(coords[i]);
        if (it != env.end()) {
            slots[i] = it->second;
            if (!shape) shape = &it->second;
        } else if (free.count(coords[i])) {
            throw unknown_identifier(coords[i], 0);
        }
    }
    if (!shape) throw std::invalid_argument("evaluate needs at least one bound jet");
    for (auto& s : slots)
        if (!s.valid()) s = jet::constant_like(*shape, 0.0);
    return eval_node(ast.root(), slots, ast.source());
}

double evaluate_value(const expr_ast& ast, std::span<const double> point) {
    if (ast.empty()) throw std::invalid_argument("evaluate of an empty expression");
    if (point.size() != ast.coordinates().size())
        throw std::invalid_argument("point size does not match the chart");
    return eval_value_node(ast.root(), point);
}

std::set<std::string> free_variables(const expr_ast& ast) {
    std::set<std::string> out;
    if (!ast.empty()) collect_variables(ast.root(), out);
    return out;
}

std::string to_string(const expr_ast& ast) {
    if (ast.empty()) return "";
    return node_to_string(ast.root());
}

bool structurally_equal(const expr_ast& a, const expr_ast& b) {
    auto eq = [](auto&& self, const expr_node_ptr& x, const expr_node_ptr& y) -> bool {
        if (x->kind != y->kind) return false;
        switch (x->kind) {
            case expr_kind::number:
                if (x->number != y->number) return false;
                break;
            case expr_kind::variable:
                if (x->name != y->name) return false;
                break;
            case expr_kind::call:
                if (x->fn != y->fn) return false;
                break;
            default: break;
        }
        if (x->children.size() != y->children.size()) return false;
        for (std::size_t i = 0; i < x->children.size(); ++i)
            if (!self(self, x->children[i], y->children[i])) return false;
        return true;
    };
    if (a.empty() || b.empty()) return a.empty() == b.empty();
    return eq(eq, a.root(), b.root());
}

}  // namespace sf
