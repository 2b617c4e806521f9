#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "solitonforge/sampling.hpp"
#include "solitonforge/soliton.hpp"
#include "test_manifolds.hpp"

using namespace sf;
using namespace sft;

namespace {

soliton_input ex1_riemann() {
    soliton_input in;
    in.manifold = hyperbolic_half_space();
    in.vector_field = field_xyz("0", "0", "1", "-1/z");
    in.kind = soliton_kind::riemann;
    in.lambda = parse("-2/z - 1", xyz);
    return in;
}

soliton_input ex2_riemann() {
    soliton_input in;
    in.manifold = horospherical();
    in.vector_field = field_xyz("0", "0", "exp(z)", "exp(z)");
    in.kind = soliton_kind::riemann;
    in.lambda = parse("2*exp(z) - 1", xyz);
    return in;
}

soliton_input ex3_ricci() {
    soliton_input in = ex1_riemann();
    in.kind = soliton_kind::ricci;
    in.lambda = parse("-1/z - 2", xyz);
    return in;
}

soliton_input ex4_ricci() {
    soliton_input in = ex2_riemann();
    in.kind = soliton_kind::ricci;
    in.lambda = parse("exp(z) - 2", xyz);
    return in;
}

soliton_input euclid_trivial(soliton_kind kind) {
    soliton_input in;
    in.manifold = euclid3();
    in.vector_field = field_xyz("1", "0", "0", "x");
    in.kind = kind;
    in.lambda = parse("0", xyz);
    return in;
}

point_analysis at(const soliton_input& in, std::vector<double> p, int order = 3) {
    return analyze_point(in, p, order);
}

std::vector<std::vector<double>> box_samples(const soliton_input& in, int count,
                                             std::uint64_t seed) {
    return sample_box(in.manifold.box, count, seed).points;
}

void require_all_pass(const check_report& report) {
    for (const auto& r : report.records) {
        CAPTURE(r.name);
        CAPTURE(r.residual);
        CAPTURE(r.reason);
        CHECK((r.skipped || r.pass));
    }
}

}  // namespace

TEST_CASE("Riemann soliton residuals vanish on the constant-curvature examples") {
    for (const auto& p : box_samples(ex1_riemann(), 16, 42))
        CHECK(residual_riemann(at(ex1_riemann(), p)) < 1e-8);
    for (const auto& p : box_samples(ex2_riemann(), 16, 42))
        CHECK(residual_riemann(at(ex2_riemann(), p)) < 1e-8);
    CHECK(residual_riemann(at(euclid_trivial(soliton_kind::riemann), {0.1, 0.2, 0.3})) ==
          0.0);
}

TEST_CASE("perturbing lambda shifts the residual linearly") {
    soliton_input in = ex1_riemann();
    in.lambda = parse("-2/z - 1.1", xyz);
    // g-orthonormal point: the shift is exactly |2c| = 0.2
    CHECK(residual_riemann(at(in, {0.0, 0.0, 1.0})) == doctest::Approx(0.2).epsilon(1e-9));
    double worst = 0.0;
    for (const auto& p : box_samples(in, 16, 42))
        worst = std::max(worst, residual_riemann(at(in, p)));
    worst = std::max(worst, residual_riemann(at(in, {0.0, 0.0, 1.0})));
    CHECK(worst >= 0.1);

    soliton_input in2 = ex1_riemann();
    in2.lambda = parse("-2/z - 1 + 0.05", xyz);
    CHECK(residual_riemann(at(in2, {0.0, 0.0, 1.0})) ==
          doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("Ricci soliton residuals vanish on the constant-curvature examples") {
    for (const auto& p : box_samples(ex3_ricci(), 16, 7))
        CHECK(residual_ricci(at(ex3_ricci(), p)) < 1e-8);
    for (const auto& p : box_samples(ex4_ricci(), 16, 7))
        CHECK(residual_ricci(at(ex4_ricci(), p)) < 1e-8);
    CHECK(residual_ricci(at(euclid_trivial(soliton_kind::ricci), {0.0, 0.0, 0.0})) == 0.0);
}

TEST_CASE("missing lambda is reported") {
    soliton_input in = ex1_riemann();
    in.lambda.reset();
    CHECK_THROWS_AS((void)residual_riemann(at(in, {0.0, 0.0, 1.0})), missing_lambda);
}

TEST_CASE("contracted identities") {
    contracted_residuals c1 = residual_contracted(at(ex1_riemann(), {0.0, 0.0, 1.0}));
    CHECK(c1.traced < 1e-12);
    CHECK(c1.scalar_trace < 1e-12);
    contracted_residuals c2 = residual_contracted(at(ex2_riemann(), {0.0, 0.0, 0.0}));
    CHECK(c2.traced < 1e-12);
    CHECK(c2.scalar_trace < 1e-12);
    contracted_residuals c3 =
        residual_contracted(at(euclid_trivial(soliton_kind::riemann), {0.0, 0.0, 0.0}));
    CHECK(c3.traced == 0.0);
    CHECK(c3.scalar_trace == 0.0);
}

TEST_CASE("lambda recovery reproduces the closed forms of the expanding example") {
    lambda_recovery rec = recover_lambda_riemann(at(ex1_riemann(), {0.0, 0.0, 2.0}), 1e-8);
    CHECK(rec.lambda == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(rec.norm2 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rec.norm2_rate == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(rec.laplacian_norm2 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rec.nabla_norm2 == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(rec.div_v == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(rec.div_rate == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(rec.gradient_ok);
}

TEST_CASE("lambda recovery reproduces the closed forms of the shrinking example") {
    lambda_recovery rec = recover_lambda_riemann(at(ex2_riemann(), {0.0, 0.0, 0.0}), 1e-8);
    CHECK(rec.lambda == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rec.norm2 == doctest::Approx(1.0));
    CHECK(rec.norm2_rate == doctest::Approx(2.0));
    CHECK(rec.laplacian_norm2 == doctest::Approx(8.0));
    CHECK(rec.nabla_norm2 == doctest::Approx(3.0));
    CHECK(rec.div_v == doctest::Approx(3.0));
    CHECK(rec.div_rate == doctest::Approx(3.0));
}

TEST_CASE("lambda recovery for the Ricci-kind examples") {
    CHECK(recover_lambda_ricci(at(ex3_ricci(), {0.0, 0.0, 1.0}), 1e-8).lambda ==
          doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(recover_lambda_ricci(at(ex4_ricci(), {0.0, 0.0, 0.0}), 1e-8).lambda ==
          doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(recover_lambda_riemann(at(euclid_trivial(soliton_kind::riemann), {0.1, 0.0, 0.0}),
                                 1e-8)
              .lambda == doctest::Approx(0.0));
    CHECK(recover_lambda_ricci(at(euclid_trivial(soliton_kind::ricci), {0.1, 0.0, 0.0}),
                               1e-8)
              .lambda == doctest::Approx(0.0));
}

TEST_CASE("recovery consistency across the sampling boxes") {
    for (const auto& p : box_samples(ex1_riemann(), 16, 111)) {
        lambda_recovery rec = recover_lambda_riemann(at(ex1_riemann(), p), 1e-8);
        double expected = -2.0 / p[2] - 1.0;
        CHECK(std::abs(rec.lambda - expected) <= 1e-7 * std::abs(expected));
    }
    for (const auto& p : box_samples(ex4_ricci(), 16, 112)) {
        lambda_recovery rec = recover_lambda_ricci(at(ex4_ricci(), p), 1e-8);
        double expected = std::exp(p[2]) - 2.0;
        CHECK(std::abs(rec.lambda - expected) <= 1e-7 * std::abs(expected));
    }
}

TEST_CASE("recovery rejects a vanishing field and flags non-gradient fields") {
    soliton_input in = euclid_trivial(soliton_kind::riemann);
    in.vector_field = field_xyz("0", "0", "0");
    CHECK_THROWS_AS((void)recover_lambda_riemann(at(in, {0.0, 0.0, 0.0}), 1e-8),
                    zero_vector_field);
    soliton_input rot = euclid_trivial(soliton_kind::riemann);
    rot.vector_field = field_xyz("-y", "x", "1");  // rotational part: not closed
    lambda_recovery rec = recover_lambda_riemann(at(rot, {0.3, 0.2, 0.0}), 1e-8);
    CHECK_FALSE(rec.gradient_ok);
}

TEST_CASE("gradient identity suite on the examples") {
    check_report r1 = gradient_identity_suite(at(ex1_riemann(), {0.0, 0.0, 1.0}), 1e-8);
    require_all_pass(r1);
    CHECK(r1.find("grad_id.ric_vv_rate") != nullptr);
    CHECK(r1.find("grad_id.grad_lambda") != nullptr);

    check_report r2 = gradient_identity_suite(at(ex2_riemann(), {0.0, 0.0, 0.0}), 1e-8);
    require_all_pass(r2);

    check_report re =
        gradient_identity_suite(at(euclid_trivial(soliton_kind::riemann), {0.2, 0.0, 0.0}),
                                1e-8);
    require_all_pass(re);

    // Ricci-kind inputs only carry the two unconditional identities.
    check_report r3 = gradient_identity_suite(at(ex3_ricci(), {0.0, 0.0, 1.0}), 1e-8);
    require_all_pass(r3);
    CHECK(r3.find("grad_id.ric_vv_rate") == nullptr);
}

TEST_CASE("the two Bochner identities close for arbitrary gradient fields") {
    std::mt19937_64 rng(2024);
    sft::expr_generator gen(rng, xyz);
    int tested = 0;
    for (int trial = 0; trial < 15; ++trial) {
        chart_manifold m = random_polynomial_metric(rng);
        std::string f = "(" + gen.bounded(3) + " + 0.3*x + 0.2*y*z)";
        std::vector<double> p = {gen.uniform() - 0.5, gen.uniform() - 0.5,
                                 gen.uniform() - 0.5};
        point_analysis pa = gradient_analysis(m, f, p);
        if (pa.v_norm2.value() < 1e-6) continue;
        check_report r = gradient_identity_suite(pa, 1e-7);
        const check_record* bochner = r.find("grad_id.bochner");
        const check_record* div_lie = r.find("grad_id.div_lie");
        REQUIRE(bochner != nullptr);
        REQUIRE(div_lie != nullptr);
        CAPTURE(f);
        CHECK(bochner->residual < 1e-7);
        CHECK(div_lie->residual < 1e-7);
        ++tested;
    }
    CHECK(tested >= 12);
}

TEST_CASE("ricci norm identities") {
    check_report r1 = ric_norm_identity(at(ex1_riemann(), {0.0, 0.0, 1.0}), 1e-8);
    require_all_pass(r1);
    CHECK_FALSE(r1.find("ric_norm.lie_vs_nabla")->skipped);
    CHECK_FALSE(r1.find("ric_norm.general")->skipped);
    CHECK(r1.find("ric_norm.solenoidal_p4")->skipped);  // div V = -3/z != 0

    check_report r2 = ric_norm_identity(at(ex2_riemann(), {0.0, 0.0, 0.0}), 1e-8);
    require_all_pass(r2);

    check_report re =
        ric_norm_identity(at(euclid_trivial(soliton_kind::riemann), {0.0, 0.0, 0.0}), 1e-8);
    require_all_pass(re);
    CHECK_FALSE(re.find("ric_norm.solenoidal_p4")->skipped);
    CHECK_FALSE(re.find("ric_norm.unitary_flat")->skipped);
}

TEST_CASE("classification of the example fields") {
    soliton_input in1 = ex1_riemann();
    std::vector<std::vector<double>> pts1 = {{0.0, 0.0, 2.0}, {0.5, -0.5, 1.0}};
    classification_report c1 = classify_vector_field(in1, pts1, 1e-8);
    CHECK(c1.is_gradient);
    CHECK(c1.potential_matches);
    CHECK_FALSE(c1.is_solenoidal);
    CHECK(c1.is_torse_forming);
    CHECK(c1.is_concircular);
    CHECK_FALSE(c1.constant_length);
    CHECK(c1.a_values[0] == doctest::Approx(-0.5).epsilon(1e-10));  // a = -1/z at z=2
    CHECK(c1.a_values[1] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(c1.concircular_grad_residual < 1e-9);
    CHECK(c1.concircular_div_residual < 1e-9);

    soliton_input in2 = ex2_riemann();
    std::vector<std::vector<double>> pts2 = {{0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
    classification_report c2 = classify_vector_field(in2, pts2, 1e-8);
    CHECK(c2.is_concircular);
    CHECK(c2.a_values[0] == doctest::Approx(1.0).epsilon(1e-10));  // a = e^z
    CHECK(c2.a_values[1] == doctest::Approx(std::exp(1.0)).epsilon(1e-10));
    CHECK(c2.concircular_grad_residual < 1e-9);
    CHECK(c2.concircular_div_residual < 1e-9);

    soliton_input ine = euclid_trivial(soliton_kind::riemann);
    std::vector<std::vector<double>> ptse = {{0.0, 0.0, 0.0}, {0.4, 0.1, -0.2}};
    classification_report ce = classify_vector_field(ine, ptse, 1e-8);
    CHECK(ce.is_gradient);
    CHECK(ce.is_solenoidal);
    CHECK(ce.is_torse_forming);
    CHECK(ce.is_concircular);
    CHECK(ce.constant_length);
    CHECK(ce.a_values[0] == doctest::Approx(0.0));
    CHECK(ce.psi_norms[0] == doctest::Approx(0.0));
}

TEST_CASE("torse decomposition uniqueness and dual consistency") {
    point_analysis pa = at(ex2_riemann(), {0.3, -0.2, 0.7});
    torse_forming_data td = torse_decompose(pa);
    CHECK(td.residual < 1e-10);

    std::vector<int> order(9);
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());
    std::swap(order[0], order[4]);
    torse_forming_data td2 = torse_decompose_ordered(pa, order);
    CHECK(std::abs(td.a - td2.a) < 1e-12);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(td.psi[i] - td2.psi[i]) < 1e-12);

    // psi(V) = g(zeta, V) = theta(zeta)
    double psi_v = 0.0, g_zeta_v = 0.0, theta_zeta = 0.0;
    for (int i = 0; i < 3; ++i) {
        psi_v += td.psi[i] * pa.v[i].value();
        theta_zeta += td.theta[i] * td.zeta[i];
        for (int j = 0; j < 3; ++j)
            g_zeta_v += pa.frame.g(i, j) * td.zeta[i] * pa.v[j].value();
    }
    CHECK(std::abs(psi_v - g_zeta_v) < 1e-12);
    CHECK(std::abs(psi_v - theta_zeta) < 1e-12);

    soliton_input zero = euclid_trivial(soliton_kind::riemann);
    zero.vector_field = field_xyz("0", "0", "0");
    CHECK_THROWS_AS((void)torse_decompose(at(zero, {0.0, 0.0, 0.0})),
                    zero_vector_field);
}

TEST_CASE("torse-forming suite on the examples") {
    point_analysis p1 = at(ex1_riemann(), {0.0, 0.0, 1.0});
    check_report r1 = torse_forming_suite(p1, 1e-8);
    require_all_pass(r1);
    CHECK_FALSE(r1.find("torse.lambda_prop")->skipped);
    // a is a genuine function here, so the constant-concircular flag is off
    CHECK(r1.find("torse.concircular_flags")->skipped);

    check_report r2 = torse_forming_suite(at(ex2_riemann(), {0.0, 0.0, 0.0}), 1e-8);
    require_all_pass(r2);

    check_report re =
        torse_forming_suite(at(euclid_trivial(soliton_kind::riemann), {0.0, 0.0, 0.0}),
                            1e-8);
    require_all_pass(re);
    CHECK(re.find("torse.concircular_flags")->skipped);  // a = 0

    soliton_input skew = euclid_trivial(soliton_kind::riemann);
    skew.vector_field = field_xyz("-y", "x", "1");
    CHECK_THROWS_AS((void)torse_forming_suite(at(skew, {0.4, 0.2, 0.0}), 1e-8),
                    not_torse_forming);
}

TEST_CASE("Jacobi-operator values of the shrinking example at the origin") {
    point_analysis pa = at(ex2_riemann(), {0.0, 0.0, 0.0});
    // R(dx, V)V = -e^{2z} dx at z=0
    double rvv_x = 0.0;
    for (int b = 0; b < 3; ++b)
        for (int k = 0; k < 3; ++k)
            rvv_x += pa.curv.up_at(0, 0, b, k).value() * pa.v[b].value() * pa.v[k].value();
    CHECK(rvv_x == doctest::Approx(-1.0).epsilon(1e-10));
    // R(dx, dz)V = -e^z dx at z=0
    double rxzv_x = 0.0;
    for (int k = 0; k < 3; ++k)
        rxzv_x += pa.curv.up_at(0, 0, 2, k).value() * pa.v[k].value();
    CHECK(rxzv_x == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("conharmonic criterion: trivial soliton holds, warped example fails consistently") {
    check_report re =
        conharmonic_criterion(at(euclid_trivial(soliton_kind::ricci), {0.0, 0.0, 0.0}),
                              1e-8);
    require_all_pass(re);
    CHECK(re.find("conharm.equivalence")->reason.find("both sides hold") !=
          std::string::npos);

    check_report r4 = conharmonic_criterion(at(ex4_ricci(), {0.0, 0.0, 0.0}), 1e-8);
    require_all_pass(r4);
    CHECK(r4.find("conharm.equivalence")->reason.find("both sides fail") !=
          std::string::npos);
    CHECK_FALSE(r4.find("conharm.v_a_theta")->skipped);
    CHECK(r4.find("conharm.v_a_theta")->pass);
    CHECK(r4.find("conharm.grad_a")->pass);

    // the Riemann equation for (V, 2*lambda) genuinely fails at the origin
    soliton_input twol = ex4_ricci();
    twol.kind = soliton_kind::riemann;
    twol.lambda = parse("2*exp(z) - 4", xyz);
    CHECK(residual_riemann(at(twol, {0.0, 0.0, 0.0})) >= 1.0);
}

TEST_CASE("nabla-Ricci conditions for concircular potentials") {
    check_report r1 = nabla_ric_conditions(at(ex1_riemann(), {0.0, 0.0, 1.3}), 1e-8);
    require_all_pass(r1);
    check_report r2 = nabla_ric_conditions(at(ex2_riemann(), {0.0, 0.0, 0.4}), 1e-8);
    require_all_pass(r2);
    check_report re = nabla_ric_conditions(
        at(euclid_trivial(soliton_kind::riemann), {0.0, 0.0, 0.0}), 1e-8);
    require_all_pass(re);

    soliton_input skew = euclid_trivial(soliton_kind::riemann);
    skew.vector_field = field_xyz("-y", "x", "1");
    CHECK_THROWS_AS((void)nabla_ric_conditions(at(skew, {0.4, 0.2, 0.0}), 1e-8),
                    not_concircular);
}

TEST_CASE("jacobi condition suite") {
    check_report r2 = jacobi_condition(at(ex2_riemann(), {0.0, 0.0, 0.0}), 1e-8);
    require_all_pass(r2);
    const check_record* branches = r2.find("jacobi.prop_p2_branches");
    REQUIRE(branches != nullptr);
    CHECK_FALSE(branches->skipped);
    CHECK(branches->pass);

    check_report r1 = jacobi_condition(at(ex1_riemann(), {0.0, 0.0, 1.0}), 1e-8);
    require_all_pass(r1);

    check_report re =
        jacobi_condition(at(euclid_trivial(soliton_kind::riemann), {0.0, 0.0, 0.0}), 1e-8);
    require_all_pass(re);
}

TEST_CASE("constant-length ingredients") {
    std::vector<std::vector<double>> pts = {{0.0, 0.0, 0.0}, {0.3, -0.2, 0.4}};
    check_report re =
        constant_length_ingredient(euclid_trivial(soliton_kind::riemann), pts, 1e-8);
    require_all_pass(re);
    for (const auto& rec : re.records) {
        CHECK_FALSE(rec.skipped);
        CHECK(rec.residual == 0.0);
    }

    std::vector<std::vector<double>> pts1 = {{0.0, 0.0, 1.0}, {0.0, 0.0, 2.0}};
    check_report r1 = constant_length_ingredient(ex1_riemann(), pts1, 1e-8);
    for (const auto& rec : r1.records) {
        CHECK(rec.skipped);
        CHECK(rec.reason.find("not constant") != std::string::npos);
    }
}

TEST_CASE("full runners pass on every example") {
    for (const soliton_input& in : {ex1_riemann(), ex2_riemann(), ex3_ricci(), ex4_ricci(),
                                    euclid_trivial(soliton_kind::riemann)}) {
        auto pts = box_samples(in, 12, 99);
        REQUIRE(!pts.empty());
        check_report checks = run_soliton_checks(in, pts, 1e-8);
        CAPTURE(name_of(in.kind));
        require_all_pass(checks);
        check_report ids = run_identity_catalog(in, pts, 1e-8);
        require_all_pass(ids);
    }
}

TEST_CASE("deterministic sampling") {
    std::vector<interval> box = {{0.0, 1.0}, {-1.0, 2.0}};
    sample_set a = sample_box(box, 8, 12345);
    sample_set b = sample_box(box, 8, 12345);
    CHECK(a.points == b.points);
    CHECK(std::is_sorted(a.points.begin(), a.points.end()));
    for (const auto& p : a.points) {
        CHECK(p[0] >= 0.0);
        CHECK(p[0] <= 1.0);
        CHECK(p[1] >= -1.0);
        CHECK(p[1] <= 2.0);
    }
    sample_set c = sample_box(box, 8, 54321);
    CHECK(a.points != c.points);

    int rejected = 0;
    sample_set d = sample_box(box, 8, 12345, [&](std::span<const double> p) {
        if (p[0] < 0.9) return std::optional<std::string>{};
        ++rejected;
        return std::optional<std::string>{"x too large"};
    });
    CHECK(d.points.size() + d.exclusions.size() == 8);
    for (const auto& p : d.points) CHECK(p[0] < 0.9);
}

TEST_CASE("merge keeps the worst point deterministically") {
    check_report a, b;
    check_record r;
    r.name = "x";
    r.residual = 1.0;
    r.tolerance = 2.0;
    r.pass = true;
    r.worst_point = {0.0};
    a.add(r);
    r.residual = 1.0;  // tie: first merged point must win
    r.worst_point = {1.0};
    b.add(r);
    a.merge(b);
    CHECK(a.records[0].worst_point == std::vector<double>{0.0});
    r.residual = 3.0;
    r.pass = false;
    r.worst_point = {2.0};
    check_report c;
    c.add(r);
    a.merge(c);
    CHECK(a.records[0].worst_point == std::vector<double>{2.0});
    CHECK_FALSE(a.records[0].pass);  // pass flags AND together
}

TEST_CASE("torse-forming decomposition with a genuinely nonzero psi") {
    // V = e^x (x, y, z) on flat space: nabla V = e^x I + dx (x) V,
    // so a = e^x and psi = dx. Not concircular, not a gradient field.
    soliton_input in;
    in.manifold = euclid3();
    in.vector_field = field_xyz("exp(x)*x", "exp(x)*y", "exp(x)*z");
    in.kind = soliton_kind::riemann;
    in.lambda = parse("0", xyz);

    std::vector<double> p = {0.4, -0.3, 0.7};
    point_analysis pa = at(in, p);
    const double ex = std::exp(p[0]);

    torse_forming_data td = torse_decompose(pa);
    CHECK(td.residual < 1e-12);
    CHECK(td.a == doctest::Approx(ex).epsilon(1e-12));
    CHECK(td.psi[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(td.psi[1]) < 1e-12);
    CHECK(std::abs(td.psi[2]) < 1e-12);
    // a's derivatives survive the jet-level solve: da = e^x dx
    CHECK(td.a_jet.derivative(0).value() == doctest::Approx(ex).epsilon(1e-10));
    CHECK(std::abs(td.a_jet.derivative(1).value()) < 1e-10);

    std::vector<std::vector<double>> pts = {p, {0.0, 0.2, -0.5}};
    classification_report cls = classify_vector_field(in, pts, 1e-8);
    CHECK(cls.is_torse_forming);
    CHECK_FALSE(cls.is_concircular);
    CHECK_FALSE(cls.is_gradient);

    // (V, 0) is not a soliton here, so the suite must separate the general
    // torse-forming facts (pass) from the soliton-conditional ones (fail).
    check_report r = torse_forming_suite(pa, 1e-8);
    for (const char* general : {"torse.lie_metric", "torse.ric_vv_codazzi",
                                "torse.rxyv", "torse.jacobi_op"}) {
        const check_record* rec = r.find(general);
        REQUIRE(rec != nullptr);
        CAPTURE(general);
        CHECK_FALSE(rec->skipped);
        CHECK(rec->pass);
    }
    CHECK_FALSE(r.find("torse.ricci_form")->pass);
    CHECK_FALSE(r.find("torse.ric_vv_soliton")->pass);
}
