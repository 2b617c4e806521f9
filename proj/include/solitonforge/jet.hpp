#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "solitonforge/errors.hpp"

namespace sf {

/// Exponent vector of one partial derivative, one entry per variable.
struct multi_index {
    std::vector<int> exponents;

    int degree() const;
    double factorial() const;  // product of the factorials of the exponents
    bool operator==(const multi_index&) const = default;
    bool operator<(const multi_index&) const;  // graded lexicographic
};

std::string to_string(const multi_index& m);

/// Shared bookkeeping for all jets of a given (nvars, order): the canonical
/// graded-lexicographic enumeration of multi-indices of total degree <= order
/// and the truncated-product position table. Instances are cached and
/// immutable, so jets are cheap to copy and safe to share across threads.
class jet_layout {
public:
    static std::shared_ptr<const jet_layout> get(int nvars, int order);

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    int size() const { return static_cast<int>(indices_.size()); }
    const multi_index& index_at(int pos) const { return indices_[pos]; }
    /// Canonical position of m, or -1 when its degree exceeds the order.
    int position(const multi_index& m) const;
    /// Position of index_at(a) + index_at(b), or -1 when out of range.
    int product_position(int a, int b) const {
        return product_[static_cast<std::size_t>(a) * indices_.size() + b];
    }

private:
    jet_layout(int nvars, int order);

    int nvars_;
    int order_;
    std::vector<multi_index> indices_;
    std::vector<int> product_;
};

/// Truncated multivariate Taylor expansion of a scalar at a point.
///
/// Coefficients are Taylor coefficients (partial derivative divided by the
/// multi-index factorial); the conversion happens on extraction, which keeps
/// truncated multiplication a plain Cauchy product.
class jet {
public:
    jet() = default;
    jet(std::shared_ptr<const jet_layout> layout, double value);

    /// One jet per coordinate: value = the coordinate value, unit first-order
    /// coefficient in its own slot, all higher coefficients zero.
    static std::vector<jet> seed_point(std::span<const double> coords, int order);

    /// Constant jet with the same shape as an existing one.
    static jet constant_like(const jet& other, double value);

    bool valid() const { return layout_ != nullptr; }
    int nvars() const { return layout_->nvars(); }
    int order() const { return layout_->order(); }
    const std::shared_ptr<const jet_layout>& layout() const { return layout_; }
    std::span<const double> coefficients() const { return coeff_; }

    double value() const { return coeff_.empty() ? 0.0 : coeff_[0]; }
    /// Stored Taylor coefficient for m (derivative / factorial).
    double coefficient(const multi_index& m) const;
    /// True partial derivative: coefficient(m) * factorial(m).
    double partial(const multi_index& m) const;
    double partial(std::initializer_list<int> exponents) const;

    /// Jet of order-1 representing the partial derivative with respect to
    /// variable `var`. Requires order >= 1.
    jet derivative(int var) const;
    /// Copy truncated to a lower order (prefix of the graded enumeration).
    jet truncated(int new_order) const;

    bool all_finite() const;

    jet operator-() const;
    jet& operator+=(const jet& rhs);
    jet& operator-=(const jet& rhs);
    jet& operator*=(const jet& rhs);
    jet& operator/=(const jet& rhs);
    jet& operator+=(double rhs);
    jet& operator-=(double rhs);
    jet& operator*=(double rhs);
    jet& operator/=(double rhs);

    friend jet operator+(jet lhs, const jet& rhs) { return lhs += rhs; }
    friend jet operator-(jet lhs, const jet& rhs) { return lhs -= rhs; }
    friend jet operator*(const jet& lhs, const jet& rhs);
    friend jet operator/(const jet& lhs, const jet& rhs);
    friend jet operator+(jet lhs, double rhs) { return lhs += rhs; }
    friend jet operator+(double lhs, jet rhs) { return rhs += lhs; }
    friend jet operator-(jet lhs, double rhs) { return lhs -= rhs; }
    friend jet operator-(double lhs, const jet& rhs) { return -rhs + lhs; }
    friend jet operator*(jet lhs, double rhs) { return lhs *= rhs; }
    friend jet operator*(double lhs, jet rhs) { return rhs *= lhs; }
    friend jet operator/(jet lhs, double rhs) { return lhs /= rhs; }
    friend jet operator/(double lhs, const jet& rhs);

    friend jet reciprocal(const jet& a);
    friend jet pow(const jet& a, long long p);
    friend jet pow(const jet& a, double p);
    friend jet exp(const jet& a);
    friend jet log(const jet& a);
    friend jet sin(const jet& a);
    friend jet cos(const jet& a);
    friend jet sinh(const jet& a);
    friend jet cosh(const jet& a);
    friend jet sqrt(const jet& a);

private:
    friend jet compose_series(const jet& a, std::span<const double> c);

    std::shared_ptr<const jet_layout> layout_;
    std::vector<double> coeff_;
};

std::string to_string(const jet& j);

}  // namespace sf
