#pragma once

// Shared oracles and generators for the test suites. Everything here is
// independent of the jet differentiation path it is used to check: finite
// differences only ever consume plain double evaluations or lower-order
// results that were already validated.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "solitonforge/expr.hpp"
#include "solitonforge/jet.hpp"

namespace sft {

// Central difference with one step of Richardson extrapolation.
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    auto d = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
    return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

// Partial derivative oracle for an expression at a point. Order-1 partials
// difference the plain double evaluation; higher orders difference the
// jet-extracted partials of one order less, so each order is validated on
// top of the previous one.
inline double fd_partial(const sf::expr_ast& ast, const std::vector<double>& point,
                         const sf::multi_index& m, double h = 1e-4) {
    const int deg = m.degree();
    if (deg == 0) return sf::evaluate_value(ast, point);
    int var = 0;
    while (m.exponents[var] == 0) ++var;
    sf::multi_index lower = m;
    lower.exponents[var] -= 1;
    auto slice = [&](double t) {
        std::vector<double> p = point;
        p[var] = t;
        if (deg == 1) return sf::evaluate_value(ast, p);
        auto seeds = sf::jet::seed_point(p, deg - 1);
        return sf::evaluate(ast, seeds).partial(lower);
    };
    return central_diff(slice, point[var], h);
}

inline bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

// Random expression generator. Values stay finite and modest on the box
// |coordinate| <= 1: arguments of exp/log/division are built from a bounded
// sub-grammar.
class expr_generator {
public:
    expr_generator(std::mt19937_64& rng, std::vector<std::string> vars)
        : rng_(rng), vars_(std::move(vars)) {}

    std::string any(int depth) {
        if (depth <= 0) return leaf();
        switch (pick(7)) {
            case 0: return "(" + any(depth - 1) + " + " + any(depth - 1) + ")";
            case 1: return "(" + any(depth - 1) + " - " + any(depth - 1) + ")";
            case 2: return "(" + any(depth - 1) + "*" + any(depth - 1) + ")";
            case 3: return "(" + any(depth - 1) + "/" + positive(depth - 1) + ")";
            case 4: return "exp(" + bounded(depth - 1) + ")";
            case 5: return "sin(" + any(depth - 1) + ")";
            default: return "(" + leaf() + "^" + std::to_string(2 + (int)pick(2)) + ")";
        }
    }

    // |value| stays <= ~1.5 on the box
    std::string bounded(int depth) {
        if (depth <= 0) return small_leaf();
        switch (pick(4)) {
            case 0: return "sin(" + any(depth - 1) + ")";
            case 1: return "cos(" + any(depth - 1) + ")";
            case 2: return "(0.5*" + bounded(depth - 1) + " + 0.4*" + bounded(depth - 1) + ")";
            default: return small_leaf();
        }
    }

    // value stays >= ~0.5 on the box
    std::string positive(int depth) { return "(1.6 + " + bounded(depth) + ")"; }

    std::string leaf() {
        if (pick(2) == 0) return var();
        return constant();
    }

    std::string small_leaf() {
        if (pick(2) == 0) return "(0.4*" + var() + ")";
        return constant();
    }

    std::string var() { return vars_[pick(vars_.size())]; }

    std::string constant() {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", 0.1 + 1.4 * uniform());
        return buf;
    }

    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    }

    std::size_t pick(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
    }

private:
    std::mt19937_64& rng_;
    std::vector<std::string> vars_;
};

}  // namespace sft
