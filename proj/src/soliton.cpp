#include "solitonforge/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "solitonforge/sampling.hpp"

namespace sf {

namespace {

double maxmag(std::initializer_list<double> vals) {
    double m = 1.0;
    for (double v : vals) m = std::max(m, std::abs(v));
    return m;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

check_record record_of(std::string name, double raw, double scale, double tol,
                       std::span<const double> point, std::string reason = "") {
    check_record r;
    r.name = std::move(name);
    r.residual = raw / scale;
    r.tolerance = tol;
    r.pass = r.residual <= tol;
    r.worst_point.assign(point.begin(), point.end());
    r.reason = std::move(reason);
    return r;
}

check_record skip_of(std::string name, double tol, std::span<const double> point,
                     std::string reason) {
    check_record r;
    r.name = std::move(name);
    r.residual = 0.0;
    r.tolerance = tol;
    r.pass = true;
    r.worst_point.assign(point.begin(), point.end());
    r.skipped = true;
    r.reason = std::move(reason);
    return r;
}

check_record verdict_of(std::string name, bool agree, double tol,
                        std::span<const double> point, std::string reason) {
    check_record r;
    r.name = std::move(name);
    r.residual = agree ? 0.0 : 1.0;
    r.tolerance = 0.5;
    r.pass = agree;
    r.worst_point.assign(point.begin(), point.end());
    r.reason = std::move(reason);
    (void)tol;
    return r;
}

std::vector<double> values_of(std::span<const jet> jets) {
    std::vector<double> out(jets.size());
    for (std::size_t i = 0; i < jets.size(); ++i) out[i] = jets[i].value();
    return out;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// dtheta_ij = d_i theta_j - d_j theta_i; the field is closed (a gradient)
// iff this vanishes.
double gradient_curl_residual(const point_analysis& pa) {
    double worst = 0.0, mag = 0.0;
    for (int i = 0; i < pa.n; ++i)
        for (int j = 0; j < pa.n; ++j) {
            double dij = pa.theta[j].derivative(i).value();
            mag = std::max(mag, std::abs(dij));
            if (i < j)
                worst = std::max(
                    worst, std::abs(dij - pa.theta[i].derivative(j).value()));
        }
    return worst / std::max(1.0, mag);
}

double ric_vv_value(const point_analysis& pa) {
    double sum = 0.0;
    for (int i = 0; i < pa.n; ++i)
        for (int j = 0; j < pa.n; ++j)
            sum += pa.ricci.ric[i * pa.n + j].value() * pa.v[i].value() * pa.v[j].value();
    return sum;
}

double ric_norm2_value(const point_analysis& pa) {
    return tensor02_inner(pa.frame, values_of(pa.ricci.ric), values_of(pa.ricci.ric));
}

void require_lambda(const point_analysis& pa) {
    if (!pa.lambda)
        throw missing_lambda("the check needs the soliton function lambda");
}

void require_riemann_kind(const point_analysis& pa, const char* what) {
    if (pa.kind != soliton_kind::riemann)
        throw std::invalid_argument(std::string(what) +
                                    " applies to Riemann solitons only");
}

// Raw max-component residual of the expanded Riemann soliton equation
// 2R + (Lie_V g (x) g) - lambda (g (x) g), together with the scale of
// G = (g (x) g)/2. Scaling by max(1, |G|) keeps the residual's response to
// a lambda shift c equal to |2c| at g-orthonormal points.
std::pair<double, double> riemann_equation_residual(const point_analysis& pa,
                                                    double lambda_value) {
    const int n = pa.n;
    tensor_value gv = tensor_value::make({variance::covariant, variance::covariant}, n,
                                         pa.frame.point());
    tensor_value lie = gv;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            gv.components[i * n + j] = pa.frame.g(i, j);
            lie.components[i * n + j] = pa.lie_g[i * n + j].value();
        }
    tensor_value gg = kulkarni_nomizu(gv, gv);
    tensor_value lg = kulkarni_nomizu(lie, gv);
    double worst = 0.0;
    for (std::size_t idx = 0; idx < gg.components.size(); ++idx) {
        double v = 2.0 * pa.curv.low[idx].value() + lg.components[idx] -
                   lambda_value * gg.components[idx];
        worst = std::max(worst, std::abs(v));
    }
    return {worst, std::max(1.0, 0.5 * gg.max_abs())};
}

std::vector<jet> solve_jet_system(std::vector<jet> m, std::vector<jet> b, int dim) {
    for (int col = 0; col < dim; ++col) {
        int pivot = col;
        for (int r = col + 1; r < dim; ++r)
            if (std::abs(m[r * dim + col].value()) > std::abs(m[pivot * dim + col].value()))
                pivot = r;
        if (m[pivot * dim + col].value() == 0.0)
            throw engine_error("torse-forming normal system is singular");
        if (pivot != col) {
            for (int c = 0; c < dim; ++c) std::swap(m[pivot * dim + c], m[col * dim + c]);
            std::swap(b[pivot], b[col]);
        }
        jet scale = reciprocal(m[col * dim + col]);
        for (int c = 0; c < dim; ++c) m[col * dim + c] = m[col * dim + c] * scale;
        b[col] = b[col] * scale;
        for (int r = 0; r < dim; ++r) {
            if (r == col) continue;
            jet f = m[r * dim + col];
            for (int c = 0; c < dim; ++c)
                m[r * dim + c] = m[r * dim + c] - f * m[col * dim + c];
            b[r] = b[r] - f * b[col];
        }
    }
    return b;
}

}  // namespace

const char* name_of(soliton_kind k) {
    return k == soliton_kind::riemann ? "riemann" : "ricci";
}

bool check_report::all_pass() const {
    for (const auto& r : records)
        if (!r.skipped && !r.pass) return false;
    return true;
}

check_record* check_report::find(const std::string& name) {
    for (auto& r : records)
        if (r.name == name) return &r;
    return nullptr;
}

const check_record* check_report::find(const std::string& name) const {
    for (const auto& r : records)
        if (r.name == name) return &r;
    return nullptr;
}

void check_report::add(check_record record) { records.push_back(std::move(record)); }

void check_report::merge(const check_report& other) {
    for (const auto& incoming : other.records) {
        check_record* mine = find(incoming.name);
        if (!mine) {
            records.push_back(incoming);
            continue;
        }
        if (mine->skipped && !incoming.skipped) {
            *mine = incoming;
        } else if (!mine->skipped && !incoming.skipped) {
            if (incoming.residual > mine->residual) {
                mine->residual = incoming.residual;
                mine->worst_point = incoming.worst_point;
                mine->reason = incoming.reason;
            }
            mine->pass = mine->pass && incoming.pass;
        }
    }
}

point_analysis analyze_point(const soliton_input& input, std::span<const double> p,
                             int order) {
    point_analysis pa;
    pa.frame = frame_at(input.manifold, p, order);
    pa.n = pa.frame.dim();
    pa.kind = input.kind;
    pa.v = evaluate_vector_field(pa.frame, input.vector_field);
    pa.theta = lower_index(pa.frame, pa.v);
    pa.v_norm2 = metric_norm2(pa.frame, pa.v);
    pa.div_v = divergence_vector_jet(pa.frame, pa.v);
    pa.nabla_v = nabla_vector_jets(pa.frame, pa.v);
    pa.lie_g = lie_derivative_metric_jets(pa.frame, pa.v);
    if (order >= 2) {
        pa.curv = riemann_jets(pa.frame);
        pa.ricci = ricci_jets_from(pa.frame, pa.curv);
    }
    if (input.lambda) pa.lambda = evaluate(*input.lambda, pa.frame.seeds());
    if (input.vector_field.potential)
        pa.potential = evaluate(*input.vector_field.potential, pa.frame.seeds());
    return pa;
}

double point_analysis::nabla_v_norm2() const {
    std::vector<double> vals = values_of(nabla_v);
    return tensor11_inner(frame, vals, vals);
}

// ---------------------------------------------------------------------------
// torse-forming decomposition
// ---------------------------------------------------------------------------

torse_forming_data torse_decompose(const point_analysis& pa) {
    std::vector<int> natural(static_cast<std::size_t>(pa.n) * pa.n);
    std::iota(natural.begin(), natural.end(), 0);
    return torse_decompose_ordered(pa, natural);
}

torse_forming_data torse_decompose_ordered(const point_analysis& pa,
                                           std::span<const int> equation_order) {
    const int n = pa.n;
    if (pa.v_norm2.value() <= 1e-12)
        throw zero_vector_field("torse-forming decomposition needs |V| > 0");
    const int m = n + 1;  // unknowns: a, psi_1..psi_n
    const int wo = pa.nabla_v[0].order();
    const jet zero = jet::constant_like(pa.nabla_v[0], 0.0);
    const jet one = jet::constant_like(pa.nabla_v[0], 1.0);

    std::vector<jet> normal(static_cast<std::size_t>(m) * m, zero);
    std::vector<jet> rhs(m, zero);
    std::vector<jet> row(m);
    for (int eq : equation_order) {
        const int i = eq / n, j = eq % n;
        row[0] = (i == j) ? one : zero;
        for (int k = 0; k < n; ++k) row[1 + k] = (j == k) ? pa.v[i].truncated(wo) : zero;
        const jet& b = pa.nabla_v[i * n + j];
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < m; ++c)
                normal[r * m + c] = normal[r * m + c] + row[r] * row[c];
            rhs[r] = rhs[r] + row[r] * b;
        }
    }
    std::vector<jet> u = solve_jet_system(std::move(normal), std::move(rhs), m);

    torse_forming_data out;
    out.a_jet = u[0];
    out.psi_jets.assign(u.begin() + 1, u.end());
    out.a = out.a_jet.value();
    out.psi = values_of(out.psi_jets);
    out.zeta = values_of(raise_index(pa.frame, out.psi_jets));
    out.theta = values_of(pa.theta);

    double worst = 0.0, mag = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double nv = pa.nabla_v[i * n + j].value();
            mag = std::max(mag, std::abs(nv));
            double model = out.a * (i == j ? 1.0 : 0.0) + pa.v[i].value() * out.psi[j];
            worst = std::max(worst, std::abs(nv - model));
        }
    out.residual = worst / std::max(1.0, mag);
    return out;
}

// ---------------------------------------------------------------------------
// defining-equation residuals
// ---------------------------------------------------------------------------

double residual_riemann(const point_analysis& pa) {
    require_lambda(pa);
    auto [raw, scale] = riemann_equation_residual(pa, pa.lambda->value());
    return raw / scale;
}

double residual_ricci(const point_analysis& pa) {
    require_lambda(pa);
    const int n = pa.n;
    const double lambda = pa.lambda->value();
    double worst = 0.0, gmax = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double g = pa.frame.g(i, j);
            gmax = std::max(gmax, std::abs(g));
            double v = 0.5 * pa.lie_g[i * n + j].value() +
                       pa.ricci.ric[i * n + j].value() - lambda * g;
            worst = std::max(worst, std::abs(v));
        }
    return worst / std::max(1.0, gmax);
}

contracted_residuals residual_contracted(const point_analysis& pa) {
    require_lambda(pa);
    const int n = pa.n;
    if (n < 3) throw dimension_error("contracted identities need dimension >= 3");
    const double lambda = pa.lambda->value();
    const double divv = pa.div_v.value();
    const double mu = ((n - 1) * lambda - divv) / (n - 2);
    contracted_residuals out;
    double worst = 0.0, gmax = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double g = pa.frame.g(i, j);
            gmax = std::max(gmax, std::abs(g));
            double v = 0.5 * pa.lie_g[i * n + j].value() +
                       pa.ricci.ric[i * n + j].value() / (n - 2) - mu * g;
            worst = std::max(worst, std::abs(v));
        }
    out.traced = worst / std::max(1.0, gmax);
    const double scal = pa.ricci.scal.value();
    const double target = (n - 1) * (n * lambda - 2.0 * divv);
    out.scalar_trace = std::abs(scal - target) / maxmag({scal, target});
    return out;
}

// ---------------------------------------------------------------------------
// lambda recovery
// ---------------------------------------------------------------------------

namespace {

lambda_recovery recovery_ingredients(const point_analysis& pa, double tol) {
    lambda_recovery out;
    out.norm2 = pa.v_norm2.value();
    if (out.norm2 <= 1e-12)
        throw zero_vector_field("lambda recovery needs |V|^2 > 0 at the point");
    out.norm2_rate = directional_derivative(pa.v, pa.v_norm2).value();
    out.laplacian_norm2 = scalar_derivatives(pa.frame, pa.v_norm2).laplacian.value();
    out.nabla_norm2 = pa.nabla_v_norm2();
    out.div_v = pa.div_v.value();
    out.div_rate = directional_derivative(pa.v, pa.div_v).value();
    out.gradient_residual = gradient_curl_residual(pa);
    out.gradient_ok = out.gradient_residual <= tol;
    return out;
}

}  // namespace

lambda_recovery recover_lambda_riemann(const point_analysis& pa, double tol) {
    if (pa.n < 3) throw dimension_error("lambda recovery needs dimension >= 3");
    lambda_recovery out = recovery_ingredients(pa, tol);
    const int n = pa.n;
    out.lambda = (out.laplacian_norm2 - 2.0 * out.nabla_norm2 +
                  (n - 2) * out.norm2_rate - 2.0 * out.div_rate) /
                     (2.0 * (n - 1) * out.norm2) +
                 out.div_v / (n - 1);
    return out;
}

lambda_recovery recover_lambda_ricci(const point_analysis& pa, double tol) {
    lambda_recovery out = recovery_ingredients(pa, tol);
    out.lambda = (out.laplacian_norm2 - 2.0 * out.nabla_norm2 + out.norm2_rate -
                  2.0 * out.div_rate) /
                 (2.0 * out.norm2);
    return out;
}

// ---------------------------------------------------------------------------
// gradient identity suite (Bochner-based catalog)
// ---------------------------------------------------------------------------

check_report gradient_identity_suite(const point_analysis& pa, double tol) {
    const int n = pa.n;
    auto point = pa.frame.point();
    check_report out;

    const double lap = scalar_derivatives(pa.frame, pa.v_norm2).laplacian.value();
    const double nv2 = pa.nabla_v_norm2();
    const double ricvv = ric_vv_value(pa);
    const double vdiv = directional_derivative(pa.v, pa.div_v).value();

    out.add(record_of("grad_id.bochner",
                      std::abs(lap - 2.0 * nv2 - 2.0 * ricvv - 2.0 * vdiv),
                      maxmag({lap, 2.0 * nv2, 2.0 * ricvv, 2.0 * vdiv}), tol, point));

    std::vector<jet> div_lie = divergence_tensor_jets(pa.frame, pa.lie_g);
    double dlv = 0.0;
    for (int j = 0; j < n; ++j) dlv += div_lie[j].value() * pa.v[j].value();
    out.add(record_of("grad_id.div_lie",
                      std::abs(dlv - 2.0 * vdiv - 2.0 * ricvv),
                      maxmag({dlv, 2.0 * vdiv, 2.0 * ricvv}), tol, point));

    if (pa.kind != soliton_kind::riemann) return out;

    if (!pa.lambda) {
        for (const char* name :
             {"grad_id.ric_vv_rate", "grad_id.divergence", "grad_id.grad_lambda"})
            out.add(skip_of(name, tol, point, "lambda not provided"));
        return out;
    }

    const double lambda = pa.lambda->value();
    const double vlam = directional_derivative(pa.v, *pa.lambda).value();
    out.add(record_of("grad_id.ric_vv_rate", std::abs(ricvv + 0.5 * (n - 1) * vlam),
                      maxmag({ricvv, 0.5 * (n - 1) * vlam}), tol, point));

    const double v2 = pa.v_norm2.value();
    if (v2 > 1e-12) {
        const double vrate = directional_derivative(pa.v, pa.v_norm2).value();
        const double divv = pa.div_v.value();
        double t1 = (n - 1) * lambda;
        double t2 = 0.5 * (n - 1) * vlam / v2;
        double t3 = 0.5 * (n - 2) * vrate / v2;
        out.add(record_of("grad_id.divergence", std::abs(divv - t1 - t2 + t3),
                          maxmag({divv, t1, t2, t3}), tol, point));
    } else {
        out.add(skip_of("grad_id.divergence", tol, point, "|V| vanishes at the point"));
    }

    std::vector<jet> grad_lambda = scalar_derivatives(pa.frame, *pa.lambda).grad;
    std::vector<double> gf;
    if (pa.potential)
        gf = values_of(scalar_derivatives(pa.frame, *pa.potential).grad);
    else
        gf = values_of(pa.v);
    double worst = 0.0, mag = 0.0;
    for (int i = 0; i < n; ++i) {
        double qgf = 0.0;
        for (int j = 0; j < n; ++j) qgf += pa.ricci.q[i * n + j].value() * gf[j];
        double lhs = grad_lambda[i].value();
        double rhs = 2.0 / (n - 1) * qgf;
        mag = std::max({mag, std::abs(lhs), std::abs(rhs)});
        worst = std::max(worst, std::abs(lhs + rhs));
    }
    out.add(record_of("grad_id.grad_lambda", worst, std::max(1.0, mag), tol, point));
    return out;
}

// ---------------------------------------------------------------------------
// Ricci-norm identities
// ---------------------------------------------------------------------------

check_report ric_norm_identity(const point_analysis& pa, double tol) {
    require_riemann_kind(pa, "ric_norm_identity");
    require_lambda(pa);
    const int n = pa.n;
    auto point = pa.frame.point();
    check_report out;

    const double nv2 = pa.nabla_v_norm2();
    std::vector<double> lie_vals = values_of(pa.lie_g);
    const double lie2 = tensor02_inner(pa.frame, lie_vals, lie_vals);

    if (gradient_curl_residual(pa) <= tol)
        out.add(record_of("ric_norm.lie_vs_nabla", std::abs(lie2 - 4.0 * nv2),
                          maxmag({lie2, 4.0 * nv2}), tol, point));
    else
        out.add(skip_of("ric_norm.lie_vs_nabla", tol, point, "V is not a gradient field"));

    const double lambda = pa.lambda->value();
    const double divv = pa.div_v.value();
    const double ric2 = ric_norm2_value(pa);
    const double mu = ((n - 1) * lambda - divv) / (n - 2);
    const double model =
        (n - 2) * (n - 2) * (n * mu * mu - 2.0 * mu * divv + nv2);
    out.add(record_of("ric_norm.general", std::abs(ric2 - model),
                      maxmag({ric2, model}), tol, point));

    const double lap = scalar_derivatives(pa.frame, pa.v_norm2).laplacian.value();
    const double vlam = directional_derivative(pa.v, *pa.lambda).value();
    const bool solenoidal = std::abs(divv) <= tol * maxmag({nv2, lambda});
    if (solenoidal) {
        double p4 = n * (n - 1) * (n - 1) * lambda * lambda +
                    0.5 * (n - 2) * (n - 2) * (lap + (n - 1) * vlam);
        out.add(record_of("ric_norm.solenoidal_p4", std::abs(ric2 - p4),
                          maxmag({ric2, p4}), tol, point));
    } else {
        out.add(skip_of("ric_norm.solenoidal_p4", tol, point, "div V does not vanish"));
    }

    const double v2 = pa.v_norm2.value();
    if (solenoidal && std::abs(v2 - 1.0) <= tol) {
        double ric_max = max_abs(values_of(pa.ricci.ric));
        double gmax = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) gmax = std::max(gmax, std::abs(pa.frame.g(i, j)));
        out.add(record_of("ric_norm.unitary_flat", ric_max, std::max(1.0, gmax), tol,
                          point, "unitary solenoidal potential forces Ric = 0"));
    } else {
        out.add(skip_of("ric_norm.unitary_flat", tol, point,
                        "V is not unitary and solenoidal"));
    }
    return out;
}

// ---------------------------------------------------------------------------
// classification
// ---------------------------------------------------------------------------

classification_report classify_vector_field(const soliton_input& input,
                                            std::span<const std::vector<double>> points,
                                            double tol, int order) {
    if (points.empty()) throw std::invalid_argument("classification needs sample points");
    classification_report rep;
    rep.tolerance = tol;
    rep.samples = static_cast<int>(points.size());
    rep.has_potential = input.vector_field.potential.has_value();

    std::vector<point_analysis> analyses(points.size());
    parallel_for_indices(static_cast<int>(points.size()), [&](int i) {
        analyses[i] = analyze_point(input, points[i], order);
    });

    for (const point_analysis& pa : analyses) {
        const int n = pa.n;
        rep.gradient_residual = std::max(rep.gradient_residual, gradient_curl_residual(pa));

        if (pa.potential) {
            std::vector<double> gf = values_of(scalar_derivatives(pa.frame, *pa.potential).grad);
            double worst = 0.0, mag = 0.0;
            for (int i = 0; i < n; ++i) {
                mag = std::max(mag, std::abs(pa.v[i].value()));
                worst = std::max(worst, std::abs(gf[i] - pa.v[i].value()));
            }
            rep.potential_residual =
                std::max(rep.potential_residual, worst / std::max(1.0, mag));
        }

        double trace_mag = 0.0;
        for (int i = 0; i < n; ++i)
            trace_mag = std::max(trace_mag, std::abs(pa.nabla_v[i * n + i].value()));
        rep.solenoidal_residual =
            std::max(rep.solenoidal_residual,
                     std::abs(pa.div_v.value()) / std::max(1.0, trace_mag));

        torse_forming_data td = torse_decompose(pa);
        rep.torse_residual = std::max(rep.torse_residual, td.residual);
        rep.a_values.push_back(td.a);
        double psi_norm2 = 0.0;
        for (int i = 0; i < n; ++i) psi_norm2 += td.psi[i] * td.zeta[i];
        double psi_norm = std::sqrt(std::max(0.0, psi_norm2));
        rep.psi_norms.push_back(psi_norm);
        double nv_mag = max_abs(values_of(pa.nabla_v));
        double v_norm = std::sqrt(std::max(0.0, pa.v_norm2.value()));
        rep.psi_residual = std::max(rep.psi_residual,
                                    psi_norm * v_norm / std::max(1.0, nv_mag));

        const double v2 = pa.v_norm2.value();
        double vrate = directional_derivative(pa.v, pa.v_norm2).value();
        rep.length_rate =
            std::max(rep.length_rate, std::abs(vrate) / std::max(1.0, v2));

        if (std::abs(td.a) > tol) {
            std::vector<jet> grad_n2 = scalar_derivatives(pa.frame, pa.v_norm2).grad;
            double worst = 0.0, mag = 0.0;
            for (int i = 0; i < n; ++i) {
                double w = grad_n2[i].value() / (2.0 * td.a);
                mag = std::max(mag, std::abs(pa.v[i].value()));
                worst = std::max(worst, std::abs(pa.v[i].value() - w));
            }
            rep.concircular_grad_residual =
                std::max(rep.concircular_grad_residual, worst / std::max(1.0, mag));
            double divv = pa.div_v.value();
            rep.concircular_div_residual =
                std::max(rep.concircular_div_residual,
                         std::abs(divv - n * td.a) / maxmag({divv, n * td.a}));
        }
    }

    rep.is_gradient = rep.gradient_residual <= tol;
    rep.potential_matches = rep.has_potential && rep.potential_residual <= tol;
    rep.is_solenoidal = rep.solenoidal_residual <= tol;
    rep.is_torse_forming = rep.torse_residual <= tol;
    rep.is_concircular = rep.is_torse_forming && rep.psi_residual <= tol;
    rep.constant_length = rep.length_rate <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// torse-forming suite
// ---------------------------------------------------------------------------

check_report torse_forming_suite(const point_analysis& pa, double tol) {
    require_riemann_kind(pa, "torse_forming_suite");
    require_lambda(pa);
    const int n = pa.n;
    auto point = pa.frame.point();

    torse_forming_data td = torse_decompose(pa);
    if (td.residual > tol)
        throw not_torse_forming("the potential field is not torse-forming at the point (residual " +
                                fmt(td.residual) + ")");

    const double a = td.a;
    const double lambda = pa.lambda->value();
    const double v2 = pa.v_norm2.value();
    std::vector<double> v_vals = values_of(pa.v);
    double psiv = 0.0;
    for (int i = 0; i < n; ++i) psiv += td.psi[i] * v_vals[i];
    const double va = directional_derivative(pa.v, td.a_jet).value();
    std::vector<double> da(n);
    for (int i = 0; i < n; ++i) da[i] = td.a_jet.derivative(i).value();

    std::vector<jet> npsi = nabla_oneform_jets(pa.frame, td.psi_jets);
    std::vector<double> npsi_vals = values_of(npsi);
    double codazzi_raw = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            codazzi_raw = std::max(codazzi_raw, std::abs(npsi_vals[i * n + j] -
                                                         npsi_vals[j * n + i]));
    const double codazzi_res = codazzi_raw / std::max(1.0, max_abs(npsi_vals));
    const bool codazzi_ok = codazzi_res <= tol;
    const std::string codazzi_note = "psi is not a Codazzi tensor (residual " +
                                     fmt(codazzi_res) + ")";

    check_report out;

    {  // (i) Lie_V g = 2 a g + psi (x) theta + theta (x) psi
        double worst = 0.0, mag = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double lie = pa.lie_g[i * n + j].value();
                mag = std::max(mag, std::abs(lie));
                double model = 2.0 * a * pa.frame.g(i, j) + td.psi[i] * td.theta[j] +
                               td.theta[i] * td.psi[j];
                worst = std::max(worst, std::abs(lie - model));
            }
        out.add(record_of("torse.lie_metric", worst, std::max(1.0, mag), tol, point));
    }

    {  // (ii) Ric = [(n-1)(lambda-2a) - psi(V)] g - (n-2)/2 (psi theta + theta psi)
        const double c = (n - 1) * (lambda - 2.0 * a) - psiv;
        double worst = 0.0, mag = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double ric = pa.ricci.ric[i * n + j].value();
                double model = c * pa.frame.g(i, j) -
                               0.5 * (n - 2) * (td.psi[i] * td.theta[j] +
                                                td.theta[i] * td.psi[j]);
                mag = std::max({mag, std::abs(ric), std::abs(model)});
                worst = std::max(worst, std::abs(ric - model));
            }
        out.add(record_of("torse.ricci_form", worst, std::max(1.0, mag), tol, point));
    }

    const double ricvv = ric_vv_value(pa);
    if (codazzi_ok) {  // (iii) Ric(V,V) = (1-n)[V(a) - a psi(V)]
        double model = (1.0 - n) * (va - a * psiv);
        out.add(record_of("torse.ric_vv_codazzi", std::abs(ricvv - model),
                          maxmag({ricvv, model}), tol, point));
    } else {
        out.add(skip_of("torse.ric_vv_codazzi", tol, point, codazzi_note));
    }

    {  // (iv) Ric(V,V) = (n-1)[(lambda-2a) - psi(V)] |V|^2
        double model = (n - 1) * ((lambda - 2.0 * a) - psiv) * v2;
        out.add(record_of("torse.ric_vv_soliton", std::abs(ricvv - model),
                          maxmag({ricvv, model}), tol, point));
    }

    if (codazzi_ok && v2 > 1e-12) {  // (v) the lambda formula of the torse-forming case
        double model = 2.0 * a + ((a + v2) * psiv - va) / v2;
        out.add(record_of("torse.lambda_prop", std::abs(lambda - model),
                          maxmag({lambda, model}), tol, point,
                          "lambda from the decomposition: " + fmt(model)));
    } else {
        out.add(skip_of("torse.lambda_prop", tol, point,
                        codazzi_ok ? "|V| vanishes at the point" : codazzi_note));
    }

    {  // (vi) R(X,Y)V = J(X)Y - J(Y)X + [(nabla_X psi)Y - (nabla_Y psi)X] V
        std::vector<double> jform(n);
        for (int i = 0; i < n; ++i) jform[i] = da[i] - a * td.psi[i];
        double worst = 0.0, mag = 0.0;
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double rv = 0.0;
                    for (int k = 0; k < n; ++k)
                        rv += pa.curv.up_at(l, i, j, k).value() * v_vals[k];
                    double anti = npsi_vals[i * n + j] - npsi_vals[j * n + i];
                    double model = jform[i] * (l == j ? 1.0 : 0.0) -
                                   jform[j] * (l == i ? 1.0 : 0.0) + anti * v_vals[l];
                    mag = std::max({mag, std::abs(rv), std::abs(model)});
                    worst = std::max(worst, std::abs(rv - model));
                }
        out.add(record_of("torse.rxyv", worst, std::max(1.0, mag), tol, point));
    }

    if (codazzi_ok) {  // (vii) Jacobi operator R(.,V)V
        double worst = 0.0, mag = 0.0;
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i) {
                double rvv = 0.0;
                for (int b = 0; b < n; ++b)
                    for (int k = 0; k < n; ++k)
                        rvv += pa.curv.up_at(l, i, b, k).value() * v_vals[b] * v_vals[k];
                double kron = (l == i) ? 1.0 : 0.0;
                double model = da[i] * v_vals[l] - va * kron -
                               a * (td.psi[i] * v_vals[l] - psiv * kron);
                mag = std::max({mag, std::abs(rvv), std::abs(model)});
                worst = std::max(worst, std::abs(rvv - model));
            }
        out.add(record_of("torse.jacobi_op", worst, std::max(1.0, mag), tol, point));
    } else {
        out.add(skip_of("torse.jacobi_op", tol, point, codazzi_note));
    }

    {  // (viii) concircular with non-zero constant a: lambda = 2a and Ric = 0
        double psi_scale = max_abs(td.psi) * std::sqrt(std::max(0.0, v2));
        bool concircular = psi_scale <= tol * std::max(1.0, max_abs(values_of(pa.nabla_v)));
        bool a_constant = max_abs(da) <= tol * std::max(1.0, std::abs(a));
        if (concircular && a_constant && std::abs(a) > tol) {
            double gmax = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    gmax = std::max(gmax, std::abs(pa.frame.g(i, j)));
            double raw = std::max(std::abs(lambda - 2.0 * a) / maxmag({lambda, 2.0 * a}),
                                  max_abs(values_of(pa.ricci.ric)) / std::max(1.0, gmax));
            out.add(record_of("torse.concircular_flags", raw, 1.0, tol, point,
                              "constant concircular case: lambda = 2a and Ric = 0"));
        } else {
            out.add(skip_of("torse.concircular_flags", tol, point,
                            !concircular ? "psi does not vanish"
                            : a_constant ? "a vanishes (hypothesis needs a non-zero constant)"
                                         : "a is not constant"));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// conharmonic criterion (Ricci solitons)
// ---------------------------------------------------------------------------

check_report conharmonic_criterion(const point_analysis& pa, double tol) {
    if (pa.kind != soliton_kind::ricci)
        throw std::invalid_argument("conharmonic_criterion applies to Ricci solitons only");
    require_lambda(pa);
    const int n = pa.n;
    if (n < 3) throw dimension_error("the conharmonic criterion needs dimension >= 3");
    auto point = pa.frame.point();
    const double lambda = pa.lambda->value();

    check_report out;

    weyl_conharmonic_result wc = weyl_conharmonic(pa.frame);
    double h_raw = 0.0, h_mag = 0.0;
    const double factor = static_cast<double>(n - 3) / (n - 2);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double h = wc.conharmonic.at({l, i, j, k});
                    double r = factor * pa.curv.up_at(l, i, j, k).value();
                    h_mag = std::max({h_mag, std::abs(h), std::abs(r)});
                    h_raw = std::max(h_raw, std::abs(h - r));
                }
    const double h_res = h_raw / std::max(1.0, h_mag);

    auto [soliton_raw, soliton_scale] = riemann_equation_residual(pa, 2.0 * lambda);
    const double soliton_res = soliton_raw / soliton_scale;

    const bool h_holds = h_res <= tol;
    const bool soliton_holds = soliton_res <= tol;
    out.add(verdict_of("conharm.equivalence", h_holds == soliton_holds, tol, point,
                       std::string("H=((n-3)/(n-2))R residual ") + fmt(h_res) +
                           "; Riemann equation residual for (V,2*lambda) " + fmt(soliton_res) +
                           "; " +
                           (h_holds == soliton_holds
                                ? (h_holds ? "both sides hold" : "both sides fail")
                                : "SIDES DISAGREE")));

    torse_forming_data td = torse_decompose(pa);
    double psi_scale = max_abs(td.psi) * std::sqrt(std::max(0.0, pa.v_norm2.value()));
    bool concircular = td.residual <= tol &&
                       psi_scale <= tol * std::max(1.0, max_abs(values_of(pa.nabla_v)));
    if (!concircular) {
        for (const char* name : {"conharm.concircular_equivalence", "conharm.v_a_theta",
                                 "conharm.grad_a"})
            out.add(skip_of(name, tol, point, "V is not concircular"));
        return out;
    }

    const double a = td.a;
    {  // constant-curvature form R(X,Y)Z = 2(lambda - a)[g(Y,Z)X - g(X,Z)Y]
        double raw = 0.0, mag = 0.0;
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        double r = pa.curv.up_at(l, i, j, k).value();
                        double model = 2.0 * (lambda - a) *
                                       (pa.frame.g(j, k) * (l == i ? 1.0 : 0.0) -
                                        pa.frame.g(i, k) * (l == j ? 1.0 : 0.0));
                        mag = std::max({mag, std::abs(r), std::abs(model)});
                        raw = std::max(raw, std::abs(r - model));
                    }
        double cc_res = raw / std::max(1.0, mag);
        bool cc_holds = cc_res <= tol;
        out.add(verdict_of("conharm.concircular_equivalence", cc_holds == soliton_holds, tol,
                           point,
                           std::string("constant-curvature form residual ") + fmt(cc_res) +
                               "; Riemann equation residual " + fmt(soliton_res) + "; " +
                               (cc_holds == soliton_holds
                                    ? (cc_holds ? "both sides hold" : "both sides fail")
                                    : "SIDES DISAGREE")));
    }

    const double va = directional_derivative(pa.v, td.a_jet).value();
    std::vector<double> da(n);
    for (int i = 0; i < n; ++i) da[i] = td.a_jet.derivative(i).value();
    const double v2 = pa.v_norm2.value();

    {  // V(a) theta = |V|^2 da
        double raw = 0.0, mag = 0.0;
        for (int i = 0; i < n; ++i) {
            double lhs = va * td.theta[i];
            double rhs = v2 * da[i];
            mag = std::max({mag, std::abs(lhs), std::abs(rhs)});
            raw = std::max(raw, std::abs(lhs - rhs));
        }
        out.add(record_of("conharm.v_a_theta", raw, std::max(1.0, mag), tol, point));
    }

    {  // grad(a) = V(a) V / |V|^2
        std::vector<double> grad_a(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) grad_a[i] += pa.frame.ginv(i, j) * da[j];
        double raw = 0.0, mag = 0.0;
        for (int i = 0; i < n; ++i) {
            double rhs = va * pa.v[i].value() / v2;
            mag = std::max({mag, std::abs(grad_a[i]), std::abs(rhs)});
            raw = std::max(raw, std::abs(grad_a[i] - rhs));
        }
        out.add(record_of("conharm.grad_a", raw, std::max(1.0, mag), tol, point));
    }
    return out;
}

// ---------------------------------------------------------------------------
// nabla-Ricci conditions (concircular case)
// ---------------------------------------------------------------------------

check_report nabla_ric_conditions(const point_analysis& pa, double tol) {
    require_riemann_kind(pa, "nabla_ric_conditions");
    require_lambda(pa);
    const int n = pa.n;
    auto point = pa.frame.point();

    torse_forming_data td = torse_decompose(pa);
    double psi_scale = max_abs(td.psi) * std::sqrt(std::max(0.0, pa.v_norm2.value()));
    if (td.residual > tol ||
        psi_scale > tol * std::max(1.0, max_abs(values_of(pa.nabla_v))))
        throw not_concircular("the potential field is not concircular at the point");

    std::vector<double> nr = values_of(nabla_ricci_jets(pa.frame, pa.ricci.ric));
    std::vector<double> ric_vals = values_of(pa.ricci.ric);
    std::vector<double> theta_vals = values_of(pa.theta);
    std::vector<double> v_vals = values_of(pa.v);
    const double nr_scale = std::max(1.0, max_abs(ric_vals));
    auto nr_at = [&](int i, int j, int k) { return nr[(i * n + j) * n + k]; };

    std::vector<double> u(n);  // d(lambda - 2a)
    double u_mag = 0.0;
    for (int i = 0; i < n; ++i) {
        double dl = pa.lambda->derivative(i).value();
        double da = td.a_jet.derivative(i).value();
        u[i] = dl - 2.0 * da;
        u_mag = std::max({u_mag, std::abs(dl), std::abs(2.0 * da)});
    }
    const double w = pa.lambda->value() - 2.0 * td.a;
    const double v2 = pa.v_norm2.value();
    std::vector<double> grad_w(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) grad_w[i] += pa.frame.ginv(i, j) * u[j];
    double vw = 0.0;
    for (int i = 0; i < n; ++i) vw += v_vals[i] * u[i];

    auto sides = [&](double lhs, double rhs) {
        return "nabla-Ric side " + fmt(lhs) + "; lambda/a side " + fmt(rhs);
    };

    check_report out;

    {  // (i) nabla Ric = 0  <->  d(lambda) = 2 da
        double lhs = max_abs(nr) / nr_scale;
        double rhs = max_abs(u) / std::max(1.0, u_mag);
        out.add(verdict_of("nric.ricci_symmetric", (lhs <= tol) == (rhs <= tol), tol,
                           point, sides(lhs, rhs)));
    }

    {  // (ii) nabla Ric = theta (x) Ric  <->  grad(lambda-2a) = (lambda-2a) V
        double raw = 0.0, mag = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double model = theta_vals[i] * ric_vals[j * n + k];
                    mag = std::max({mag, std::abs(nr_at(i, j, k)), std::abs(model)});
                    raw = std::max(raw, std::abs(nr_at(i, j, k) - model));
                }
        double lhs = raw / std::max(1.0, mag);
        double rraw = 0.0, rmag = 0.0;
        for (int i = 0; i < n; ++i) {
            double model = w * v_vals[i];
            rmag = std::max({rmag, std::abs(grad_w[i]), std::abs(model)});
            rraw = std::max(rraw, std::abs(grad_w[i] - model));
        }
        double rhs = rraw / std::max(1.0, rmag);
        out.add(verdict_of("nric.theta_recurrent", (lhs <= tol) == (rhs <= tol), tol,
                           point, sides(lhs, rhs)));
    }

    {  // (iii) Codazzi Ric  <->  d(lambda-2a) (x) I = I (x) d(lambda-2a)
        double raw = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    raw = std::max(raw, std::abs(nr_at(i, j, k) - nr_at(j, i, k)));
        double lhs = raw / nr_scale;
        double rraw = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) {
                    double lhs_c = u[i] * (l == j ? 1.0 : 0.0);
                    double rhs_c = u[j] * (l == i ? 1.0 : 0.0);
                    rraw = std::max(rraw, std::abs(lhs_c - rhs_c));
                }
        double rhs = rraw / std::max(1.0, u_mag);
        out.add(verdict_of("nric.codazzi", (lhs <= tol) == (rhs <= tol), tol, point,
                           sides(lhs, rhs)));
    }

    {  // (iv) cyclic Ric  =>  grad(lambda-2a) = -2 V(lambda-2a) V / |V|^2
        double raw = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    raw = std::max(raw, std::abs(nr_at(i, j, k) + nr_at(j, k, i) +
                                                 nr_at(k, i, j)));
        double lhs = raw / nr_scale;
        double rraw = 0.0, rmag = 0.0;
        for (int i = 0; i < n; ++i) {
            double model = -2.0 * vw * v_vals[i] / v2;
            rmag = std::max({rmag, std::abs(grad_w[i]), std::abs(model)});
            rraw = std::max(rraw, std::abs(grad_w[i] - model));
        }
        double rhs = rraw / std::max(1.0, rmag);
        bool pass = !(lhs <= tol && rhs > tol);  // one-directional implication
        out.add(verdict_of("nric.cyclic", pass, tol, point, sides(lhs, rhs)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Jacobi / curvature derivation conditions
// ---------------------------------------------------------------------------

check_report jacobi_condition(const point_analysis& pa, double tol) {
    require_riemann_kind(pa, "jacobi_condition");
    require_lambda(pa);
    const int n = pa.n;
    auto point = pa.frame.point();

    torse_forming_data td = torse_decompose(pa);
    if (td.residual > tol)
        throw not_torse_forming("the potential field is not torse-forming at the point");

    const double a = td.a;
    const double lambda = pa.lambda->value();
    const double v2 = pa.v_norm2.value();
    std::vector<double> v_vals = values_of(pa.v);
    double psiv = 0.0;
    for (int i = 0; i < n; ++i) psiv += td.psi[i] * v_vals[i];
    double zeta_norm2 = 0.0;
    for (int i = 0; i < n; ++i) zeta_norm2 += td.psi[i] * td.zeta[i];

    check_report out;

    {  // (i) the 2R(V,Y)Z display derived from the soliton equation
        double raw = 0.0, mag = 0.0;
        const double c = 2.0 * (lambda - 2.0 * a) - psiv;
        for (int l = 0; l < n; ++l)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double rv = 0.0;
                    for (int b = 0; b < n; ++b)
                        rv += 2.0 * v_vals[b] * pa.curv.up_at(l, b, j, k).value();
                    double kron_lj = (l == j) ? 1.0 : 0.0;
                    double model =
                        c * (pa.frame.g(j, k) * v_vals[l] - td.theta[k] * kron_lj) -
                        td.psi[k] * (td.theta[j] * v_vals[l] - v2 * kron_lj) -
                        (v2 * pa.frame.g(j, k) - td.theta[j] * td.theta[k]) * td.zeta[l];
                    mag = std::max({mag, std::abs(rv), std::abs(model)});
                    raw = std::max(raw, std::abs(rv - model));
                }
        out.add(record_of("jacobi.r_vyz", raw, std::max(1.0, mag), tol, point));
    }

    double derivation_res;
    {  // (ii) R(V,.) acting as a derivation on Ric
        double raw = 0.0, mag = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double t1 = 0.0, t2 = 0.0;
                    for (int b = 0; b < n; ++b)
                        for (int m = 0; m < n; ++m) {
                            t1 += v_vals[b] * pa.curv.up_at(m, b, i, j).value() *
                                  pa.ricci.ric[m * n + k].value();
                            t2 += v_vals[b] * pa.curv.up_at(m, b, i, k).value() *
                                  pa.ricci.ric[j * n + m].value();
                        }
                    mag = std::max({mag, std::abs(t1), std::abs(t2)});
                    raw = std::max(raw, std::abs(t1 + t2));
                }
        derivation_res = raw / std::max(1.0, mag);
        out.add(record_of("jacobi.derivation", raw, std::max(1.0, mag), tol, point));
    }

    if (derivation_res <= tol && v2 > 1e-12) {  // (iii) the two branch conditions
        double rate = 0.5 * directional_derivative(pa.v, pa.v_norm2).value() / v2;
        double branch_a = std::abs(lambda - rate - a) / maxmag({lambda, rate, a});
        double vnorm = std::sqrt(std::max(0.0, v2));
        double znorm = std::sqrt(std::max(0.0, zeta_norm2));
        double branch_b_plus = std::abs(a - rate - vnorm * znorm);
        double branch_b_minus = std::abs(a - rate + vnorm * znorm);
        double branch_b = std::min(branch_b_plus, branch_b_minus) / maxmag({a, rate});
        double best = std::min(branch_a, branch_b);
        std::string reason = std::string("branch A (lambda side) ") + fmt(branch_a) +
                             "; branch B (a side, best sign) " + fmt(branch_b);
        out.add(record_of("jacobi.prop_p2_branches", best, 1.0, tol, point, reason));
    } else {
        out.add(skip_of("jacobi.prop_p2_branches", tol, point,
                        v2 <= 1e-12 ? "|V| vanishes at the point"
                                    : "curvature derivation condition does not hold"));
    }
    return out;
}

// ---------------------------------------------------------------------------
// constant-length ingredients of the compact non-existence theorem
// ---------------------------------------------------------------------------

check_report constant_length_ingredient(const soliton_input& input,
                                        std::span<const std::vector<double>> points,
                                        double tol, int order) {
    if (input.kind != soliton_kind::riemann)
        throw std::invalid_argument("constant_length_ingredient applies to Riemann solitons");
    if (points.empty()) throw std::invalid_argument("needs sample points");

    static const char* names[] = {"constlen.ric_vv", "constlen.bochner",
                                  "constlen.lambda_div"};
    std::vector<point_analysis> analyses(points.size());
    parallel_for_indices(static_cast<int>(points.size()), [&](int i) {
        analyses[i] = analyze_point(input, points[i], order);
    });

    auto skip_all = [&](const std::string& reason) {
        check_report out;
        for (const char* name : names) out.add(skip_of(name, tol, points[0], reason));
        return out;
    };

    double rate = 0.0;
    for (const auto& pa : analyses) {
        double v2 = pa.v_norm2.value();
        rate = std::max(rate, std::abs(directional_derivative(pa.v, pa.v_norm2).value()) /
                                  std::max(1.0, v2));
        if (gradient_curl_residual(pa) > tol)
            return skip_all("V is not a gradient field");
    }
    if (rate > tol) return skip_all("|V| is not constant across the samples");
    if (!input.lambda) return skip_all("lambda not provided");

    double lam_lo = 0.0, lam_hi = 0.0;
    for (std::size_t i = 0; i < analyses.size(); ++i) {
        double l = analyses[i].lambda->value();
        lam_lo = (i == 0) ? l : std::min(lam_lo, l);
        lam_hi = (i == 0) ? l : std::max(lam_hi, l);
    }
    if ((lam_hi - lam_lo) > tol * maxmag({lam_lo, lam_hi}))
        return skip_all("lambda is not constant across the samples");

    check_report out;
    for (const auto& pa : analyses) {
        auto point = pa.frame.point();
        const int n = pa.n;
        check_report local;
        double ricvv = ric_vv_value(pa);
        double ric_mag = max_abs(values_of(pa.ricci.ric)) * pa.v_norm2.value();
        local.add(record_of("constlen.ric_vv", std::abs(ricvv),
                            std::max(1.0, ric_mag), tol, point));
        double nv2 = pa.nabla_v_norm2();
        double vdiv = directional_derivative(pa.v, pa.div_v).value();
        local.add(record_of("constlen.bochner", std::abs(nv2 + vdiv),
                            maxmag({nv2, vdiv}), tol, point));
        double lambda = pa.lambda->value();
        double model = pa.div_v.value() / (n - 1);
        local.add(record_of("constlen.lambda_div", std::abs(lambda - model),
                            maxmag({lambda, model}), tol, point));
        out.merge(local);
    }
    return out;
}

// ---------------------------------------------------------------------------
// curvature symmetry suite
// ---------------------------------------------------------------------------

check_report curvature_symmetry_suite(const chart_manifold& m,
                                      std::span<const std::vector<double>> points,
                                      double tol, int order) {
    if (points.empty()) throw std::invalid_argument("needs sample points");
    std::vector<check_report> reports(points.size());
    parallel_for_indices(static_cast<int>(points.size()), [&](int idx) {
        const auto& p = points[idx];
        point_frame f = frame_at(m, p, order);
        curvature_jets r = riemann_jets(f);
        ricci_jets rj = ricci_jets_from(f, r);
        const int n = f.dim();
        auto low = [&](int i, int j, int k, int l) { return r.low_at(i, j, k, l).value(); };
        double mag = 0.0;
        for (const jet& c : r.low) mag = std::max(mag, std::abs(c.value()));
        double anti_first = 0.0, anti_last = 0.0, pair_sym = 0.0, bianchi = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double v = low(i, j, k, l);
                        anti_first = std::max(anti_first, std::abs(v + low(j, i, k, l)));
                        anti_last = std::max(anti_last, std::abs(v + low(i, j, l, k)));
                        pair_sym = std::max(pair_sym, std::abs(v - low(k, l, i, j)));
                        bianchi = std::max(
                            bianchi,
                            std::abs(v + low(i, k, l, j) + low(i, l, j, k)));
                    }
        const double scale = std::max(1.0, mag);
        check_report local;
        local.add(record_of("curv.antisym_first", anti_first, scale, tol, p));
        local.add(record_of("curv.antisym_last", anti_last, scale, tol, p));
        local.add(record_of("curv.pair_symmetry", pair_sym, scale, tol, p));
        local.add(record_of("curv.bianchi_first", bianchi, scale, tol, p));
        if (order >= 3) {
            std::vector<jet> div_ric = divergence_tensor_jets(f, rj.ric);
            double raw = 0.0, bmag = 0.0;
            for (int j = 0; j < n; ++j) {
                double dr = div_ric[j].value();
                double ds = 0.5 * rj.scal.derivative(j).value();
                bmag = std::max({bmag, std::abs(dr), std::abs(ds)});
                raw = std::max(raw, std::abs(dr - ds));
            }
            local.add(record_of("curv.bianchi_contracted", raw, std::max(1.0, bmag), tol,
                                p));
        } else {
            local.add(skip_of("curv.bianchi_contracted", tol, p,
                              "needs a frame of order 3"));
        }
        reports[idx] = std::move(local);
    });
    check_report out;
    for (const auto& r : reports) out.merge(r);
    return out;
}

// ---------------------------------------------------------------------------
// suite runners
// ---------------------------------------------------------------------------

check_report run_soliton_checks(const soliton_input& input,
                                std::span<const std::vector<double>> points, double tol,
                                int order) {
    if (points.empty()) throw std::invalid_argument("needs sample points");
    std::vector<check_report> reports(points.size());
    parallel_for_indices(static_cast<int>(points.size()), [&](int idx) {
        point_analysis pa = analyze_point(input, points[idx], order);
        auto point = pa.frame.point();
        check_report local;
        if (input.kind == soliton_kind::riemann) {
            require_lambda(pa);
            auto [raw, scale] = riemann_equation_residual(pa, pa.lambda->value());
            local.add(record_of("soliton.riemann_equation", raw, scale, tol, point));
            if (pa.n >= 3) {
                contracted_residuals c = residual_contracted(pa);
                local.add(record_of("soliton.traced_equation", c.traced, 1.0, tol, point));
                local.add(record_of("soliton.scalar_trace", c.scalar_trace, 1.0, tol, point));
            }
        } else {
            local.add(record_of("soliton.ricci_equation", residual_ricci(pa), 1.0, tol, point));
        }
        reports[idx] = std::move(local);
    });
    check_report out;
    for (const auto& r : reports) out.merge(r);
    out.merge(curvature_symmetry_suite(input.manifold, points, tol, order));
    return out;
}

check_report run_identity_catalog(const soliton_input& input,
                                  std::span<const std::vector<double>> points, double tol,
                                  int order) {
    if (points.empty()) throw std::invalid_argument("needs sample points");
    classification_report cls = classify_vector_field(input, points, tol, order);
    const bool gradient = cls.is_gradient;
    const bool torse = cls.is_torse_forming;
    const bool concircular = cls.is_concircular;
    const bool has_lambda = input.lambda.has_value();

    std::vector<check_report> reports(points.size());
    std::vector<double> scal_values(points.size(), 0.0);
    parallel_for_indices(static_cast<int>(points.size()), [&](int idx) {
        point_analysis pa = analyze_point(input, points[idx], order);
        auto point = pa.frame.point();
        check_report local;
        scal_values[idx] = pa.ricci.scal.value();

        if (gradient) {
            local.merge(gradient_identity_suite(pa, tol));
            if (has_lambda) {
                lambda_recovery rec = input.kind == soliton_kind::riemann
                                          ? recover_lambda_riemann(pa, tol)
                                          : recover_lambda_ricci(pa, tol);
                double expected = pa.lambda->value();
                local.add(record_of("lambda.recovery", std::abs(rec.lambda - expected),
                                    std::max(1.0, std::abs(expected)), tol, point,
                                    "recovered " + fmt(rec.lambda) + ", supplied " +
                                        fmt(expected)));
            } else {
                local.add(skip_of("lambda.recovery", tol, point, "lambda not provided"));
            }
        } else {
            for (const char* name :
                 {"grad_id.bochner", "grad_id.div_lie", "grad_id.ric_vv_rate",
                  "grad_id.divergence", "grad_id.grad_lambda", "lambda.recovery"})
                local.add(skip_of(name, tol, point, "V is not a gradient field"));
        }

        if (input.kind == soliton_kind::riemann) {
            if (has_lambda) {
                local.merge(ric_norm_identity(pa, tol));
                if (torse) {
                    local.merge(torse_forming_suite(pa, tol));
                    local.merge(jacobi_condition(pa, tol));
                } else {
                    for (const char* name :
                         {"torse.lie_metric", "torse.ricci_form", "torse.ric_vv_codazzi",
                          "torse.ric_vv_soliton", "torse.lambda_prop", "torse.rxyv",
                          "torse.jacobi_op", "torse.concircular_flags", "jacobi.r_vyz",
                          "jacobi.derivation", "jacobi.prop_p2_branches"})
                        local.add(skip_of(name, tol, point, "V is not torse-forming"));
                }
                if (concircular && order >= 3) {
                    local.merge(nabla_ric_conditions(pa, tol));
                } else {
                    const char* why = concircular ? "needs a frame of order 3"
                                                  : "V is not concircular";
                    for (const char* name : {"nric.ricci_symmetric", "nric.theta_recurrent",
                                             "nric.codazzi", "nric.cyclic"})
                        local.add(skip_of(name, tol, point, why));
                }
            }
        } else if (has_lambda) {
            local.merge(conharmonic_criterion(pa, tol));
        }
        reports[idx] = std::move(local);
    });

    check_report out;
    for (const auto& r : reports) out.merge(r);

    if (input.kind == soliton_kind::riemann)
        out.merge(constant_length_ingredient(input, points, tol, order));

    if (input.kind == soliton_kind::ricci && concircular) {
        double lo = scal_values[0], hi = scal_values[0];
        for (double s : scal_values) {
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        out.add(record_of("conharm.scal_constant", hi - lo, maxmag({lo, hi}), tol,
                          points[0], "scal range [" + fmt(lo) + ", " + fmt(hi) + "]"));
    }
    return out;
}

}  // namespace sf
