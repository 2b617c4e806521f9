#include "solitonforge/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace sf {

namespace {

void require_same_shape(const jet& a, const jet& b) {
    if (!a.valid() || !b.valid())
        throw std::invalid_argument("operation on an empty jet");
    if (a.layout() == b.layout()) return;
    if (a.nvars() != b.nvars() || a.order() != b.order())
        throw std::invalid_argument("jet operands differ in nvars or order");
}

void require_finite(const jet& j, const char* what) {
    if (!j.all_finite())
        throw domain_error(std::string("non-finite result in ") + what);
}

double int_factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

int multi_index::degree() const {
    int d = 0;
    for (int e : exponents) d += e;
    return d;
}

double multi_index::factorial() const {
    double f = 1.0;
    for (int e : exponents) f *= int_factorial(e);
    return f;
}

bool multi_index::operator<(const multi_index& rhs) const {
    int da = degree(), db = rhs.degree();
    if (da != db) return da < db;
    return exponents < rhs.exponents;
}

std::string to_string(const multi_index& m) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < m.exponents.size(); ++i) {
        if (i) os << ",";
        os << m.exponents[i];
    }
    os << ")";
    return os.str();
}

jet_layout::jet_layout(int nvars, int order) : nvars_(nvars), order_(order) {
    // Enumerate exponent vectors by total degree, lexicographically inside
    // each degree block; truncation to a lower order is then a prefix copy.
    std::vector<int> current(nvars, 0);
    for (int d = 0; d <= order; ++d) {
        auto emit = [&](auto&& self, int slot, int remaining) -> void {
            if (slot == nvars - 1) {
                current[slot] = remaining;
                indices_.push_back(multi_index{current});
                return;
            }
            for (int e = 0; e <= remaining; ++e) {
                current[slot] = e;
                self(self, slot + 1, remaining - e);
            }
        };
        emit(emit, 0, d);
    }

    const int m = size();
    product_.assign(static_cast<std::size_t>(m) * m, -1);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            if (indices_[a].degree() + indices_[b].degree() > order) continue;
            multi_index sum = indices_[a];
            for (int v = 0; v < nvars; ++v) sum.exponents[v] += indices_[b].exponents[v];
            product_[static_cast<std::size_t>(a) * m + b] = position(sum);
        }
    }
}

int jet_layout::position(const multi_index& m) const {
    if (static_cast<int>(m.exponents.size()) != nvars_)
        throw std::invalid_argument("multi-index length does not match nvars");
    for (int e : m.exponents)
        if (e < 0) throw std::invalid_argument("negative exponent in multi-index");
    if (m.degree() > order_) return -1;
    auto it = std::lower_bound(indices_.begin(), indices_.end(), m);
    return static_cast<int>(it - indices_.begin());
}

std::shared_ptr<const jet_layout> jet_layout::get(int nvars, int order) {
    if (nvars < 1) throw std::invalid_argument("jet needs at least one variable");
    if (order < 0) throw std::invalid_argument("jet order must be non-negative");
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const jet_layout>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{nvars, order}];
    if (!slot) slot = std::shared_ptr<const jet_layout>(new jet_layout(nvars, order));
    return slot;
}

jet::jet(std::shared_ptr<const jet_layout> layout, double value)
    : layout_(std::move(layout)), coeff_(layout_->size(), 0.0) {
    coeff_[0] = value;
}

std::vector<jet> jet::seed_point(std::span<const double> coords, int order) {
    if (coords.empty()) throw std::invalid_argument("seed_point needs coordinates");
    auto layout = jet_layout::get(static_cast<int>(coords.size()), order);
    std::vector<jet> seeds;
    seeds.reserve(coords.size());
    for (std::size_t v = 0; v < coords.size(); ++v) {
        jet j(layout, coords[v]);
        if (order >= 1) {
            multi_index unit{std::vector<int>(coords.size(), 0)};
            unit.exponents[v] = 1;
            j.coeff_[layout->position(unit)] = 1.0;
        }
        seeds.push_back(std::move(j));
    }
    return seeds;
}

jet jet::constant_like(const jet& other, double value) {
    if (!other.valid()) throw std::invalid_argument("constant_like of an empty jet");
    return jet(other.layout_, value);
}

double jet::coefficient(const multi_index& m) const {
    int pos = layout_->position(m);
    if (pos < 0)
        throw order_error("multi-index degree " + std::to_string(m.degree()) +
                          " exceeds jet order " + std::to_string(order()));
    return coeff_[pos];
}

double jet::partial(const multi_index& m) const {
    return coefficient(m) * m.factorial();
}

double jet::partial(std::initializer_list<int> exponents) const {
    return partial(multi_index{std::vector<int>(exponents)});
}

jet jet::derivative(int var) const {
    if (var < 0 || var >= nvars())
        throw std::invalid_argument("derivative variable out of range");
    if (order() < 1)
        throw order_error("cannot differentiate an order-0 jet");
    auto small = jet_layout::get(nvars(), order() - 1);
    jet out;
    out.layout_ = small;
    out.coeff_.assign(small->size(), 0.0);
    for (int pos = 0; pos < small->size(); ++pos) {
        multi_index m = small->index_at(pos);
        m.exponents[var] += 1;
        out.coeff_[pos] = coeff_[layout_->position(m)] * m.exponents[var];
    }
    return out;
}

jet jet::truncated(int new_order) const {
    if (new_order > order())
        throw order_error("cannot truncate to a higher order");
    if (new_order == order()) return *this;
    auto small = jet_layout::get(nvars(), new_order);
    jet out;
    out.layout_ = small;
    out.coeff_.assign(coeff_.begin(), coeff_.begin() + small->size());
    return out;
}

bool jet::all_finite() const {
    for (double c : coeff_)
        if (!std::isfinite(c)) return false;
    return true;
}

jet jet::operator-() const {
    jet out = *this;
    for (double& c : out.coeff_) c = -c;
    return out;
}

jet& jet::operator+=(const jet& rhs) {
    require_same_shape(*this, rhs);
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += rhs.coeff_[i];
    return *this;
}

jet& jet::operator-=(const jet& rhs) {
    require_same_shape(*this, rhs);
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= rhs.coeff_[i];
    return *this;
}

jet& jet::operator*=(const jet& rhs) {
    *this = *this * rhs;
    return *this;
}

jet& jet::operator/=(const jet& rhs) {
    *this = *this / rhs;
    return *this;
}

jet& jet::operator+=(double rhs) {
    coeff_.at(0) += rhs;
    return *this;
}

jet& jet::operator-=(double rhs) {
    coeff_.at(0) -= rhs;
    return *this;
}

jet& jet::operator*=(double rhs) {
    for (double& c : coeff_) c *= rhs;
    return *this;
}

jet& jet::operator/=(double rhs) {
    if (rhs == 0.0) throw domain_error("division by zero value");
    for (double& c : coeff_) c /= rhs;
    return *this;
}

jet operator*(const jet& lhs, const jet& rhs) {
    require_same_shape(lhs, rhs);
    const jet_layout& layout = *lhs.layout_;
    jet out;
    out.layout_ = lhs.layout_;
    out.coeff_.assign(layout.size(), 0.0);
    const int m = layout.size();
    for (int a = 0; a < m; ++a) {
        double ca = lhs.coeff_[a];
        if (ca == 0.0) continue;
        for (int b = 0; b < m; ++b) {
            int t = layout.product_position(a, b);
            if (t >= 0) out.coeff_[t] += ca * rhs.coeff_[b];
        }
    }
    return out;
}

/// result = sum_k c[k] * (a - a.value)^k, truncated at the jet order.
jet compose_series(const jet& a, std::span<const double> c) {
    jet u = a;
    u.coeff_[0] = 0.0;
    jet r = jet::constant_like(a, c.back());
    for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) {
        r = r * u;
        r.coeff_[0] += c[k];
    }
    return r;
}

jet reciprocal(const jet& a) {
    const double v = a.value();
    if (v == 0.0) throw domain_error("division by zero value");
    std::vector<double> c(a.order() + 1);
    double p = 1.0 / v;
    for (int k = 0; k <= a.order(); ++k) {
        c[k] = (k % 2 == 0) ? p : -p;
        p /= v;
    }
    jet out = compose_series(a, c);
    require_finite(out, "reciprocal");
    return out;
}

jet operator/(const jet& lhs, const jet& rhs) {
    require_same_shape(lhs, rhs);
    return lhs * reciprocal(rhs);
}

jet operator/(double lhs, const jet& rhs) { return reciprocal(rhs) * lhs; }

jet pow(const jet& a, long long p) {
    if (p < 0) return pow(reciprocal(a), -p);
    jet result = jet::constant_like(a, 1.0);
    jet base = a;
    while (p > 0) {
        if (p & 1) result = result * base;
        p >>= 1;
        if (p) base = base * base;
    }
    require_finite(result, "integer power");
    return result;
}

jet pow(const jet& a, double p) {
    // Non-integer exponents go through exp(p log a) and need a positive base;
    // integer exponents are repeated truncated multiplication so negative
    // bases stay valid.
    if (p == std::rint(p) && std::abs(p) <= 2147483647.0)
        return pow(a, static_cast<long long>(p));
    return exp(log(a) * p);
}

jet exp(const jet& a) {
    std::vector<double> c(a.order() + 1);
    const double e = std::exp(a.value());
    double f = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        c[k] = e / f;
        f *= (k + 1);
    }
    jet out = compose_series(a, c);
    require_finite(out, "exp");
    return out;
}

jet log(const jet& a) {
    const double v = a.value();
    if (v <= 0.0) throw domain_error("log of a non-positive value");
    std::vector<double> c(a.order() + 1);
    c[0] = std::log(v);
    double p = v;
    for (int k = 1; k <= a.order(); ++k) {
        c[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (k * p);
        p *= v;
    }
    jet out = compose_series(a, c);
    require_finite(out, "log");
    return out;
}

jet sin(const jet& a) {
    const double s = std::sin(a.value()), co = std::cos(a.value());
    std::vector<double> c(a.order() + 1);
    const double cycle[4] = {s, co, -s, -co};
    double f = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        c[k] = cycle[k % 4] / f;
        f *= (k + 1);
    }
    return compose_series(a, c);
}

jet cos(const jet& a) {
    const double s = std::sin(a.value()), co = std::cos(a.value());
    std::vector<double> c(a.order() + 1);
    const double cycle[4] = {co, -s, -co, s};
    double f = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        c[k] = cycle[k % 4] / f;
        f *= (k + 1);
    }
    return compose_series(a, c);
}

jet sinh(const jet& a) {
    const double sh = std::sinh(a.value()), ch = std::cosh(a.value());
    std::vector<double> c(a.order() + 1);
    double f = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        c[k] = ((k % 2 == 0) ? sh : ch) / f;
        f *= (k + 1);
    }
    jet out = compose_series(a, c);
    require_finite(out, "sinh");
    return out;
}

jet cosh(const jet& a) {
    const double sh = std::sinh(a.value()), ch = std::cosh(a.value());
    std::vector<double> c(a.order() + 1);
    double f = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        c[k] = ((k % 2 == 0) ? ch : sh) / f;
        f *= (k + 1);
    }
    jet out = compose_series(a, c);
    require_finite(out, "cosh");
    return out;
}

jet sqrt(const jet& a) {
    const double v = a.value();
    if (v <= 0.0) throw domain_error("sqrt of a non-positive value");
    std::vector<double> c(a.order() + 1);
    double binom = 1.0;  // generalized binomial C(1/2, k)
    for (int k = 0; k <= a.order(); ++k) {
        if (k > 0) binom *= (0.5 - (k - 1)) / k;
        c[k] = binom * std::pow(v, 0.5 - k);
    }
    jet out = compose_series(a, c);
    require_finite(out, "sqrt");
    return out;
}

std::string to_string(const jet& j) {
    if (!j.valid()) return "<empty jet>";
    std::ostringstream os;
    os << "jet(order=" << j.order() << ")[";
    for (int pos = 0; pos < j.layout()->size(); ++pos) {
        if (pos) os << ", ";
        os << to_string(j.layout()->index_at(pos)) << ":" << j.coefficients()[pos];
    }
    os << "]";
    return os.str();
}

}  // namespace sf
