#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "solitonforge/geometry.hpp"

namespace sf {

enum class soliton_kind : std::uint8_t { riemann, ricci };

const char* name_of(soliton_kind k);

struct soliton_input {
    chart_manifold manifold;
    vector_field_spec vector_field;
    soliton_kind kind = soliton_kind::riemann;
    std::optional<expr_ast> lambda;
};

/// One named residual check: residual is scaled by the check's reference
/// magnitude (max(1, magnitude)), so the default tolerance applies uniformly.
struct check_record {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::vector<double> worst_point;
    bool skipped = false;
    std::string reason;
};

struct check_report {
    std::vector<check_record> records;

    bool all_pass() const;
    check_record* find(const std::string& name);
    const check_record* find(const std::string& name) const;
    void add(check_record record);
    /// Max-residual merge by name; the earlier argmax wins ties, so merging
    /// points in sorted order keeps the reduction deterministic.
    void merge(const check_report& other);
};

/// Everything the soliton checks need at one chart point, computed once.
struct point_analysis {
    point_frame frame;
    int n = 0;
    soliton_kind kind = soliton_kind::riemann;
    std::vector<jet> v;        // V components, frame order
    std::vector<jet> theta;    // g-dual 1-form of V
    jet v_norm2;               // g(V,V)
    jet div_v;
    std::vector<jet> nabla_v;  // (nabla V)^i_j at [i*n+j]
    std::vector<jet> lie_g;    // (Lie_V g)_ij
    curvature_jets curv;
    ricci_jets ricci;
    std::optional<jet> lambda;
    std::optional<jet> potential;

    double nabla_v_norm2() const;  // |nabla V|^2 at the point
};

point_analysis analyze_point(const soliton_input& input, std::span<const double> p,
                             int order);

/// Pointwise least-squares decomposition nabla V = a I + psi (x) V.
/// a and psi are carried as jets so their derivatives stay available.
struct torse_forming_data {
    double a = 0.0;
    std::vector<double> psi;    // covector components
    std::vector<double> zeta;   // g-dual vector of psi
    std::vector<double> theta;  // g-dual covector of V
    double residual = 0.0;      // scaled decomposition residual
    jet a_jet;
    std::vector<jet> psi_jets;
};

torse_forming_data torse_decompose(const point_analysis& pa);
/// Same solve with the n^2 equations accumulated in a caller-given order
/// (exposed for the uniqueness property test).
torse_forming_data torse_decompose_ordered(const point_analysis& pa,
                                           std::span<const int> equation_order);

struct classification_report {
    bool is_gradient = false;
    double gradient_residual = 0.0;
    bool has_potential = false;
    bool potential_matches = false;
    double potential_residual = 0.0;
    bool is_solenoidal = false;
    double solenoidal_residual = 0.0;
    bool is_torse_forming = false;
    double torse_residual = 0.0;
    bool is_concircular = false;
    double psi_residual = 0.0;
    bool constant_length = false;
    double length_rate = 0.0;
    // Concircular cross-checks: V = grad(|V|^2)/(2a) and div V = n a.
    double concircular_grad_residual = 0.0;
    double concircular_div_residual = 0.0;
    std::vector<double> a_values;
    std::vector<double> psi_norms;
    int samples = 0;
    double tolerance = 0.0;
};

classification_report classify_vector_field(const soliton_input& input,
                                            std::span<const std::vector<double>> points,
                                            double tol, int order = 3);

// --- defining-equation residuals (scaled) ---

double residual_riemann(const point_analysis& pa);
double residual_ricci(const point_analysis& pa);

struct contracted_residuals {
    double traced = 0.0;
    double scalar_trace = 0.0;
};
contracted_residuals residual_contracted(const point_analysis& pa);

// --- closed-form recovery of the soliton function from the field ---

struct lambda_recovery {
    double lambda = 0.0;
    // the six ingredients, in report order
    double norm2 = 0.0;            // |V|^2
    double norm2_rate = 0.0;       // V(|V|^2)
    double laplacian_norm2 = 0.0;  // Laplacian of |V|^2
    double nabla_norm2 = 0.0;      // |nabla V|^2
    double div_v = 0.0;
    double div_rate = 0.0;         // V(div V)
    bool gradient_ok = true;       // hypothesis check, warning-level
    double gradient_residual = 0.0;
};

lambda_recovery recover_lambda_riemann(const point_analysis& pa, double tol);
lambda_recovery recover_lambda_ricci(const point_analysis& pa, double tol);

// --- per-point identity suites ---

check_report gradient_identity_suite(const point_analysis& pa, double tol);
check_report ric_norm_identity(const point_analysis& pa, double tol);
check_report torse_forming_suite(const point_analysis& pa, double tol);
check_report conharmonic_criterion(const point_analysis& pa, double tol);
check_report nabla_ric_conditions(const point_analysis& pa, double tol);
check_report jacobi_condition(const point_analysis& pa, double tol);

// --- sample-set suites ---

check_report constant_length_ingredient(const soliton_input& input,
                                        std::span<const std::vector<double>> points,
                                        double tol, int order = 3);

check_report curvature_symmetry_suite(const chart_manifold& m,
                                      std::span<const std::vector<double>> points,
                                      double tol, int order = 3);

/// Residual suites for the defining equations (the `check` command).
check_report run_soliton_checks(const soliton_input& input,
                                std::span<const std::vector<double>> points, double tol,
                                int order = 3);

/// The full identity catalog, gated by kind and by the classification of the
/// potential vector field (the `identities` command).
check_report run_identity_catalog(const soliton_input& input,
                                  std::span<const std::vector<double>> points, double tol,
                                  int order = 3);

}  // namespace sf
