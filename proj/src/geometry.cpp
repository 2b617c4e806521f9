#include "solitonforge/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>

namespace sf {

namespace {

// ---- dense value-level linear algebra (dimensions are tiny) ----

double lu_determinant(std::vector<double> a, int n) {
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        if (a[pivot * n + col] == 0.0) return 0.0;
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
            det = -det;
        }
        det *= a[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            double f = a[r * n + col] / a[col * n + col];
            for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
        }
    }
    return det;
}

bool cholesky_ok(std::vector<double> a, int n) {
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = a[i * n + j];
            for (int k = 0; k < j; ++k) sum -= a[i * n + k] * a[j * n + k];
            if (i == j) {
                if (sum <= 0.0) return false;
                a[i * n + j] = std::sqrt(sum);
            } else {
                a[i * n + j] = sum / a[j * n + j];
            }
        }
    }
    return true;
}

std::vector<jet> invert_jet_matrix(std::vector<jet> a, int n) {
    std::vector<jet> inv(static_cast<std::size_t>(n) * n);
    const jet one = jet::constant_like(a[0], 1.0);
    const jet zero = jet::constant_like(a[0], 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i * n + j] = (i == j) ? one : zero;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col].value()) > std::abs(a[pivot * n + col].value()))
                pivot = r;
        if (a[pivot * n + col].value() == 0.0)
            throw singular_metric("metric matrix is numerically singular");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(a[pivot * n + c], a[col * n + c]);
                std::swap(inv[pivot * n + c], inv[col * n + c]);
            }
        }
        jet scale = reciprocal(a[col * n + col]);
        for (int c = 0; c < n; ++c) {
            a[col * n + c] = a[col * n + c] * scale;
            inv[col * n + c] = inv[col * n + c] * scale;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            jet f = a[r * n + col];
            if (f.value() == 0.0 && f.all_finite()) {
                bool all_zero = true;
                for (double c : f.coefficients())
                    if (c != 0.0) { all_zero = false; break; }
                if (all_zero) continue;
            }
            for (int c = 0; c < n; ++c) {
                a[r * n + c] = a[r * n + c] - f * a[col * n + c];
                inv[r * n + c] = inv[r * n + c] - f * inv[col * n + c];
            }
        }
    }
    return inv;
}

// ---- order-aligning jet arithmetic for mixed-order tensor formulas ----

jet tr(const jet& a, int order) { return a.order() == order ? a : a.truncated(order); }

jet jmul(const jet& a, const jet& b) {
    int k = std::min(a.order(), b.order());
    return tr(a, k) * tr(b, k);
}

jet jadd(const jet& a, const jet& b) {
    int k = std::min(a.order(), b.order());
    return tr(a, k) + tr(b, k);
}

jet jsub(const jet& a, const jet& b) {
    int k = std::min(a.order(), b.order());
    return tr(a, k) - tr(b, k);
}

bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

bool is_function_name(const std::string& s) {
    static const char* names[] = {"exp", "log", "sin", "cos", "sinh", "cosh", "sqrt"};
    for (const char* n : names)
        if (s == n) return true;
    return false;
}

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

multi_index unit_index(int nvars, int var) {
    multi_index m{std::vector<int>(nvars, 0)};
    m.exponents[var] = 1;
    return m;
}

}  // namespace

chart_manifold chart_manifold::from_strings(
    int dimension, std::vector<std::string> coordinates,
    const std::vector<std::vector<std::string>>& rows, std::vector<interval> box) {
    if (dimension < 2)
        throw schema_error("dimension must be at least 2", "/dimension");
    if (static_cast<int>(coordinates.size()) != dimension)
        throw schema_error("coordinate count does not match dimension", "/coordinates");
    for (std::size_t i = 0; i < coordinates.size(); ++i) {
        const std::string& name = coordinates[i];
        if (!valid_identifier(name))
            throw schema_error("coordinate name '" + name + "' is not a valid identifier",
                               "/coordinates/" + std::to_string(i));
        if (is_function_name(name))
            throw schema_error("coordinate name '" + name + "' collides with a function",
                               "/coordinates/" + std::to_string(i));
        for (std::size_t j = i + 1; j < coordinates.size(); ++j)
            if (coordinates[j] == name)
                throw schema_error("duplicate coordinate name '" + name + "'",
                                   "/coordinates/" + std::to_string(j));
    }
    if (static_cast<int>(box.size()) != dimension)
        throw schema_error("sampling box must cover every coordinate", "/sampling/box");
    for (int i = 0; i < dimension; ++i)
        if (!(box[i].lo < box[i].hi))
            throw schema_error("degenerate interval for coordinate '" + coordinates[i] + "'",
                               "/sampling/box/" + coordinates[i]);

    if (static_cast<int>(rows.size()) != dimension)
        throw schema_error("metric must have one row per dimension", "/metric");
    bool upper_only = true, full = true;
    for (int i = 0; i < dimension; ++i) {
        if (static_cast<int>(rows[i].size()) != dimension - i) upper_only = false;
        if (static_cast<int>(rows[i].size()) != dimension) full = false;
    }
    if (!upper_only && !full)
        throw schema_error("metric rows must form a full matrix or its upper triangle",
                           "/metric");
    if (full && dimension > 1) {
        for (int i = 0; i < dimension; ++i)
            for (int j = 0; j < i; ++j)
                if (trimmed(rows[i][j]) != trimmed(rows[j][i]))
                    throw schema_error("metric is not symmetric as text at (" +
                                           std::to_string(i) + "," + std::to_string(j) + ")",
                                       "/metric/" + std::to_string(i) + "/" +
                                           std::to_string(j));
    }

    chart_manifold m;
    m.dimension = dimension;
    m.coordinates = std::move(coordinates);
    m.box = std::move(box);
    m.metric.resize(static_cast<std::size_t>(dimension) * dimension);
    auto coords_ptr = std::make_shared<const std::vector<std::string>>(m.coordinates);
    for (int i = 0; i < dimension; ++i) {
        for (int j = i; j < dimension; ++j) {
            const std::string& text = full ? rows[i][j] : rows[i][j - i];
            expr_ast ast = parse(text, coords_ptr);
            m.metric[static_cast<std::size_t>(i) * dimension + j] = ast;
            m.metric[static_cast<std::size_t>(j) * dimension + i] = ast;
        }
    }
    return m;
}

double point_frame::dg(int k, int i, int j) const {
    multi_index m = unit_index(n_, k);
    return g_[idx2(i, j)].partial(m);
}

double point_frame::d2g(int k, int l, int i, int j) const {
    multi_index m{std::vector<int>(n_, 0)};
    m.exponents[k] += 1;
    m.exponents[l] += 1;
    return g_[idx2(i, j)].partial(m);
}

double point_frame::d3g(int k, int l, int m_, int i, int j) const {
    multi_index m{std::vector<int>(n_, 0)};
    m.exponents[k] += 1;
    m.exponents[l] += 1;
    m.exponents[m_] += 1;
    return g_[idx2(i, j)].partial(m);
}

double point_frame::dgamma(int l, int k, int i, int j) const {
    return gamma_[idx3(k, i, j)].partial(unit_index(n_, l));
}

double point_frame::d2gamma(int l, int m_, int k, int i, int j) const {
    multi_index m{std::vector<int>(n_, 0)};
    m.exponents[l] += 1;
    m.exponents[m_] += 1;
    return gamma_[idx3(k, i, j)].partial(m);
}

point_frame frame_at(const chart_manifold& m, std::span<const double> p, int order) {
    if (order < 1 || order > 3)
        throw std::invalid_argument("frame order must be 1, 2 or 3");
    const int n = m.dimension;
    if (static_cast<int>(p.size()) != n)
        throw std::invalid_argument("point size does not match the chart dimension");

    point_frame f;
    f.n_ = n;
    f.order_ = order;
    f.point_.assign(p.begin(), p.end());
    f.coords_ = m.coordinates;
    f.seeds_ = jet::seed_point(p, order);

    f.g_.resize(static_cast<std::size_t>(n) * n);
    std::vector<double> g_values(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            jet value = evaluate(m.metric_entry(i, j), f.seeds_);
            f.g_[f.idx2(i, j)] = value;
            f.g_[f.idx2(j, i)] = value;
            g_values[f.idx2(i, j)] = g_values[f.idx2(j, i)] = value.value();
        }
    }

    double scale = 0.0;
    for (double v : g_values) scale = std::max(scale, std::abs(v));
    f.det_ = lu_determinant(g_values, n);
    if (std::abs(f.det_) < 1e-12 * std::pow(scale, n))
        throw singular_metric("metric is singular at the requested point");
    if (!cholesky_ok(g_values, n))
        throw not_positive_definite("metric is not positive definite at the point");

    f.ginv_ = invert_jet_matrix(f.g_, n);

    // Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
    const int gamma_order = order - 1;
    std::vector<jet> dg(static_cast<std::size_t>(n) * n * n);  // dg[(k,i,j)] = d_k g_ij
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                dg[f.idx3(k, i, j)] = f.g_[f.idx2(i, j)].derivative(k);
    f.gamma_.resize(static_cast<std::size_t>(n) * n * n);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                jet sum = jet::constant_like(f.seeds_[0], 0.0).truncated(gamma_order);
                for (int l = 0; l < n; ++l) {
                    jet inner = jadd(dg[f.idx3(i, j, l)], dg[f.idx3(j, i, l)]);
                    inner = jsub(inner, dg[f.idx3(l, i, j)]);
                    sum = jadd(sum, jmul(f.ginv_[f.idx2(k, l)], inner));
                }
                sum = sum * 0.5;
                f.gamma_[f.idx3(k, i, j)] = sum;
                f.gamma_[f.idx3(k, j, i)] = sum;
            }
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// tensor_value
// ---------------------------------------------------------------------------

tensor_value tensor_value::make(std::vector<variance> signature, int dim,
                                std::span<const double> point) {
    tensor_value t;
    t.signature = std::move(signature);
    t.dim = dim;
    std::size_t size = 1;
    for (std::size_t r = 0; r < t.signature.size(); ++r) size *= dim;
    t.components.assign(size, 0.0);
    t.point.assign(point.begin(), point.end());
    return t;
}

std::size_t tensor_value::flat(std::initializer_list<int> idx) const {
    if (static_cast<int>(idx.size()) != rank())
        throw std::invalid_argument("tensor index rank mismatch");
    std::size_t pos = 0;
    for (int i : idx) pos = pos * dim + i;
    return pos;
}

double tensor_value::max_abs() const {
    double m = 0.0;
    for (double c : components) m = std::max(m, std::abs(c));
    return m;
}

// ---------------------------------------------------------------------------
// jet-level cores
// ---------------------------------------------------------------------------

curvature_jets riemann_jets(const point_frame& f) {
    const int n = f.dim();
    if (f.order() < 2) throw order_error("riemann curvature needs a frame of order >= 2");
    const int ko = f.order() - 2;

    // dgam[(l,k,i,j)] = d_l Gamma^k_ij
    std::vector<jet> dgam(static_cast<std::size_t>(n) * n * n * n);
    auto d4 = [n](int a, int b, int c, int d) {
        return ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
    };
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    dgam[d4(l, k, i, j)] = f.gamma_jet(k, i, j).derivative(l);

    curvature_jets r;
    r.n = n;
    r.up.resize(static_cast<std::size_t>(n) * n * n * n);
    r.low.resize(static_cast<std::size_t>(n) * n * n * n);
    for (int l = 0; l < n; ++l) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < n; ++k) {
                    jet sum = jsub(dgam[d4(i, l, j, k)], dgam[d4(j, l, i, k)]);
                    for (int a = 0; a < n; ++a) {
                        sum = jadd(sum, jmul(tr(f.gamma_jet(l, i, a), ko),
                                             tr(f.gamma_jet(a, j, k), ko)));
                        sum = jsub(sum, jmul(tr(f.gamma_jet(l, j, a), ko),
                                             tr(f.gamma_jet(a, i, k), ko)));
                    }
                    r.up[d4(l, i, j, k)] = sum;
                }
            }
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    jet sum = jet::constant_like(f.seeds()[0], 0.0).truncated(ko);
                    for (int m = 0; m < n; ++m)
                        sum = jadd(sum, jmul(tr(f.g_jet(l, m), ko), r.up[d4(m, i, j, k)]));
                    r.low[d4(i, j, k, l)] = sum;
                }
    return r;
}

ricci_jets ricci_jets_from(const point_frame& f, const curvature_jets& r) {
    const int n = f.dim();
    const int ko = f.order() - 2;
    ricci_jets out;
    out.n = n;
    out.ric.resize(static_cast<std::size_t>(n) * n);
    out.q.resize(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            jet sum = jet::constant_like(f.seeds()[0], 0.0).truncated(ko);
            for (int i = 0; i < n; ++i) sum = jadd(sum, r.up_at(i, i, j, k));
            out.ric[j * n + k] = sum;
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            jet sum = jet::constant_like(f.seeds()[0], 0.0).truncated(ko);
            for (int k = 0; k < n; ++k)
                sum = jadd(sum, jmul(f.ginv_jet(i, k), out.ric[k * n + j]));
            out.q[i * n + j] = sum;
        }
    out.scal = jet::constant_like(f.seeds()[0], 0.0).truncated(ko);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            out.scal = jadd(out.scal, jmul(f.ginv_jet(j, k), out.ric[j * n + k]));
    return out;
}

std::vector<jet> evaluate_vector_field(const point_frame& f, const vector_field_spec& v) {
    if (static_cast<int>(v.components.size()) != f.dim())
        throw std::invalid_argument("vector field component count mismatch");
    std::vector<jet> out(f.dim());
    for (int i = 0; i < f.dim(); ++i) out[i] = evaluate(v.components[i], f.seeds());
    return out;
}

std::vector<jet> lie_derivative_metric_jets(const point_frame& f, std::span<const jet> v) {
    const int n = f.dim();
    std::vector<jet> out(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            jet sum = jmul(v[0], f.g_jet(i, j).derivative(0));
            for (int k = 1; k < n; ++k)
                sum = jadd(sum, jmul(v[k], f.g_jet(i, j).derivative(k)));
            for (int k = 0; k < n; ++k) {
                sum = jadd(sum, jmul(f.g_jet(k, j), v[k].derivative(i)));
                sum = jadd(sum, jmul(f.g_jet(i, k), v[k].derivative(j)));
            }
            out[i * n + j] = sum;
            out[j * n + i] = sum;
        }
    }
    return out;
}

std::vector<jet> nabla_vector_jets(const point_frame& f, std::span<const jet> v) {
    const int n = f.dim();
    std::vector<jet> out(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            jet sum = v[i].derivative(j);
            for (int k = 0; k < n; ++k)
                sum = jadd(sum, jmul(f.gamma_jet(i, j, k), v[k]));
            out[i * n + j] = sum;
        }
    return out;
}

scalar_derivative_jets scalar_derivatives(const point_frame& f, const jet& s) {
    const int n = f.dim();
    scalar_derivative_jets out;
    std::vector<jet> ds(n);
    for (int i = 0; i < n; ++i) ds[i] = s.derivative(i);
    out.grad.resize(n);
    for (int i = 0; i < n; ++i) {
        jet sum = jmul(f.ginv_jet(i, 0), ds[0]);
        for (int j = 1; j < n; ++j) sum = jadd(sum, jmul(f.ginv_jet(i, j), ds[j]));
        out.grad[i] = sum;
    }
    out.hess.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            jet sum = ds[i].derivative(j);
            for (int k = 0; k < n; ++k)
                sum = jsub(sum, jmul(f.gamma_jet(k, i, j), ds[k]));
            out.hess[i * n + j] = sum;
            out.hess[j * n + i] = sum;
        }
    out.laplacian = jmul(f.ginv_jet(0, 0), out.hess[0]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == 0 && j == 0) continue;
            out.laplacian = jadd(out.laplacian, jmul(f.ginv_jet(i, j), out.hess[i * n + j]));
        }
    return out;
}

jet divergence_vector_jet(const point_frame& f, std::span<const jet> v) {
    const int n = f.dim();
    jet sum = v[0].derivative(0);
    for (int i = 1; i < n; ++i) sum = jadd(sum, v[i].derivative(i));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) sum = jadd(sum, jmul(f.gamma_jet(i, i, k), v[k]));
    return sum;
}

std::vector<jet> divergence_tensor_jets(const point_frame& f, std::span<const jet> t02) {
    const int n = f.dim();
    std::vector<jet> out(n);
    for (int j = 0; j < n; ++j) {
        jet total = jet::constant_like(f.seeds()[0], 0.0)
                        .truncated(std::max(0, std::min(f.order() - 1,
                                                        t02[0].order() - 1)));
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                jet term = t02[k * n + j].derivative(i);
                for (int l = 0; l < n; ++l) {
                    term = jsub(term, jmul(f.gamma_jet(l, i, k), t02[l * n + j]));
                    term = jsub(term, jmul(f.gamma_jet(l, i, j), t02[k * n + l]));
                }
                total = jadd(total, jmul(f.ginv_jet(i, k), term));
            }
        }
        out[j] = total;
    }
    return out;
}

std::vector<jet> nabla_ricci_jets(const point_frame& f, std::span<const jet> ric) {
    const int n = f.dim();
    std::vector<jet> out(static_cast<std::size_t>(n) * n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                jet sum = ric[j * n + k].derivative(i);
                for (int l = 0; l < n; ++l) {
                    sum = jsub(sum, jmul(f.gamma_jet(l, i, j), ric[l * n + k]));
                    sum = jsub(sum, jmul(f.gamma_jet(l, i, k), ric[j * n + l]));
                }
                out[(i * n + j) * n + k] = sum;
            }
    return out;
}

std::vector<jet> nabla_oneform_jets(const point_frame& f, std::span<const jet> psi) {
    const int n = f.dim();
    std::vector<jet> out(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            jet sum = psi[j].derivative(i);
            for (int k = 0; k < n; ++k)
                sum = jsub(sum, jmul(f.gamma_jet(k, i, j), psi[k]));
            out[i * n + j] = sum;
        }
    return out;
}

jet directional_derivative(std::span<const jet> v, const jet& s) {
    jet sum = jmul(v[0], s.derivative(0));
    for (std::size_t i = 1; i < v.size(); ++i)
        sum = jadd(sum, jmul(v[i], s.derivative(static_cast<int>(i))));
    return sum;
}

std::vector<jet> lower_index(const point_frame& f, std::span<const jet> v) {
    const int n = f.dim();
    std::vector<jet> out(n);
    for (int i = 0; i < n; ++i) {
        jet sum = jmul(f.g_jet(i, 0), v[0]);
        for (int j = 1; j < n; ++j) sum = jadd(sum, jmul(f.g_jet(i, j), v[j]));
        out[i] = sum;
    }
    return out;
}

std::vector<jet> raise_index(const point_frame& f, std::span<const jet> covector) {
    const int n = f.dim();
    std::vector<jet> out(n);
    for (int i = 0; i < n; ++i) {
        jet sum = jmul(f.ginv_jet(i, 0), covector[0]);
        for (int j = 1; j < n; ++j) sum = jadd(sum, jmul(f.ginv_jet(i, j), covector[j]));
        out[i] = sum;
    }
    return out;
}

jet metric_norm2(const point_frame& f, std::span<const jet> v) {
    const int n = f.dim();
    jet sum = jmul(jmul(f.g_jet(0, 0), v[0]), v[0]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == 0 && j == 0) continue;
            sum = jadd(sum, jmul(jmul(f.g_jet(i, j), v[i]), v[j]));
        }
    return sum;
}

double tensor02_inner(const point_frame& f, std::span<const double> s,
                      std::span<const double> t) {
    const int n = f.dim();
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    sum += s[i * n + j] * t[k * n + l] * f.ginv(i, k) * f.ginv(j, l);
    return sum;
}

double tensor11_inner(const point_frame& f, std::span<const double> a,
                      std::span<const double> b) {
    const int n = f.dim();
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    sum += a[i * n + j] * b[k * n + l] * f.g(i, k) * f.ginv(j, l);
    return sum;
}

// ---------------------------------------------------------------------------
// value-level surface
// ---------------------------------------------------------------------------

namespace {

const variance CO = variance::covariant;
const variance CONTRA = variance::contravariant;

tensor_value values_of_rank2(const point_frame& f, std::span<const jet> jets,
                             std::vector<variance> sig) {
    tensor_value t = tensor_value::make(std::move(sig), f.dim(), f.point());
    for (std::size_t i = 0; i < jets.size(); ++i) t.components[i] = jets[i].value();
    return t;
}

}  // namespace

tensor_value riemann(const point_frame& f) {
    curvature_jets r = riemann_jets(f);
    tensor_value t = tensor_value::make({CO, CO, CO, CO}, f.dim(), f.point());
    for (std::size_t i = 0; i < r.low.size(); ++i) t.components[i] = r.low[i].value();
    return t;
}

tensor_value riemann_operator(const point_frame& f) {
    curvature_jets r = riemann_jets(f);
    tensor_value t = tensor_value::make({CONTRA, CO, CO, CO}, f.dim(), f.point());
    for (std::size_t i = 0; i < r.up.size(); ++i) t.components[i] = r.up[i].value();
    return t;
}

ricci_result ricci_scalar(const point_frame& f) {
    curvature_jets r = riemann_jets(f);
    ricci_jets rj = ricci_jets_from(f, r);
    ricci_result out;
    out.ricci = values_of_rank2(f, rj.ric, {CO, CO});
    out.ricci_operator = values_of_rank2(f, rj.q, {CONTRA, CO});
    out.scalar = rj.scal.value();
    return out;
}

tensor_value lie_derivative_metric(const point_frame& f, const vector_field_spec& v) {
    std::vector<jet> vj = evaluate_vector_field(f, v);
    return values_of_rank2(f, lie_derivative_metric_jets(f, vj), {CO, CO});
}

tensor_value covariant_derivative_vector(const point_frame& f, const vector_field_spec& v) {
    std::vector<jet> vj = evaluate_vector_field(f, v);
    return values_of_rank2(f, nabla_vector_jets(f, vj), {CONTRA, CO});
}

hessian_result grad_hess_laplacian(const point_frame& f, const expr_ast& scalar_field) {
    jet s = evaluate(scalar_field, f.seeds());
    scalar_derivative_jets d = scalar_derivatives(f, s);
    hessian_result out;
    out.grad = tensor_value::make({CONTRA}, f.dim(), f.point());
    for (int i = 0; i < f.dim(); ++i) out.grad.components[i] = d.grad[i].value();
    out.hessian = values_of_rank2(f, d.hess, {CO, CO});
    out.laplacian = d.laplacian.value();
    return out;
}

double divergence(const point_frame& f, const vector_field_spec& v) {
    std::vector<jet> vj = evaluate_vector_field(f, v);
    return divergence_vector_jet(f, vj).value();
}

tensor_value divergence(const point_frame& f, std::span<const jet> t02) {
    std::vector<jet> d = divergence_tensor_jets(f, t02);
    tensor_value t = tensor_value::make({CO}, f.dim(), f.point());
    for (int i = 0; i < f.dim(); ++i) t.components[i] = d[i].value();
    return t;
}

tensor_value kulkarni_nomizu(const tensor_value& t1, const tensor_value& t2) {
    if (t1.rank() != 2 || t2.rank() != 2 || t1.dim != t2.dim)
        throw std::invalid_argument("kulkarni_nomizu needs two (0,2) tensors");
    if (t1.point != t2.point)
        throw std::invalid_argument("kulkarni_nomizu operands have different base points");
    const int n = t1.dim;
    tensor_value out = tensor_value::make({CO, CO, CO, CO}, n, t1.point);
    auto a = [&](int i, int j) { return t1.components[i * n + j]; };
    auto b = [&](int i, int j) { return t2.components[i * n + j]; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    out.at({i, j, k, l}) = a(i, l) * b(j, k) + a(j, k) * b(i, l) -
                                           a(i, k) * b(j, l) - a(j, l) * b(i, k);
    return out;
}

weyl_conharmonic_result weyl_conharmonic(const point_frame& f) {
    const int n = f.dim();
    if (n < 3) throw dimension_error("weyl/conharmonic tensors need dimension >= 3");
    curvature_jets r = riemann_jets(f);
    ricci_jets rj = ricci_jets_from(f, r);
    const double scal = rj.scal.value();

    tensor_value gv = tensor_value::make({CO, CO}, n, f.point());
    tensor_value ricv = tensor_value::make({CO, CO}, n, f.point());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            gv.components[i * n + j] = f.g(i, j);
            ricv.components[i * n + j] = rj.ric[i * n + j].value();
        }
    tensor_value gg = kulkarni_nomizu(gv, gv);
    tensor_value ricg = kulkarni_nomizu(ricv, gv);

    weyl_conharmonic_result out;
    out.weyl = tensor_value::make({CO, CO, CO, CO}, n, f.point());
    const double c_gg = scal / (2.0 * (n - 1) * (n - 2));
    const double c_ricg = 1.0 / (n - 2);
    for (std::size_t idx = 0; idx < out.weyl.components.size(); ++idx)
        out.weyl.components[idx] = r.low[idx].value() + c_gg * gg.components[idx] -
                                   c_ricg * ricg.components[idx];

    out.conharmonic = tensor_value::make({CONTRA, CO, CO, CO}, n, f.point());
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double h = r.up_at(l, i, j, k).value() +
                               c_ricg * (f.g(k, i) * rj.q[l * n + j].value() -
                                         f.g(j, k) * rj.q[l * n + i].value() +
                                         ricv.components[k * n + i] * (l == j ? 1.0 : 0.0) -
                                         ricv.components[j * n + k] * (l == i ? 1.0 : 0.0));
                    out.conharmonic.at({l, i, j, k}) = h;
                }
    return out;
}

tensor_value nabla_ricci(const point_frame& f) {
    if (f.order() < 3) throw order_error("nabla_ricci needs a frame of order 3");
    curvature_jets r = riemann_jets(f);
    ricci_jets rj = ricci_jets_from(f, r);
    std::vector<jet> nr = nabla_ricci_jets(f, rj.ric);
    tensor_value t = tensor_value::make({CO, CO, CO}, f.dim(), f.point());
    for (std::size_t i = 0; i < nr.size(); ++i) t.components[i] = nr[i].value();
    return t;
}

pairing_result norms_inner(const point_frame& f, const tensor_value& s,
                           const tensor_value& t) {
    if (s.rank() != 2 || t.rank() != 2)
        throw std::invalid_argument("norms_inner expects (0,2) tensors");
    pairing_result out;
    out.inner = tensor02_inner(f, s.components, t.components);
    out.norm2 = tensor02_inner(f, s.components, s.components);
    return out;
}

tensor_value curvature_derivation_on_ric(const point_frame& f, const vector_field_spec& v) {
    const int n = f.dim();
    std::vector<jet> vj = evaluate_vector_field(f, v);
    curvature_jets r = riemann_jets(f);
    ricci_jets rj = ricci_jets_from(f, r);
    tensor_value out = tensor_value::make({CO, CO, CO}, n, f.point());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double sum = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int m = 0; m < n; ++m)
                        sum += vj[a].value() *
                               (r.up_at(m, a, i, j).value() * rj.ric[m * n + k].value() +
                                r.up_at(m, a, i, k).value() * rj.ric[j * n + m].value());
                out.at({i, j, k}) = sum;
            }
    return out;
}

}  // namespace sf
