#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "solitonforge/expr.hpp"
#include "solitonforge/jet.hpp"

namespace sf {

struct interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// A coordinate chart with a metric given componentwise as expressions.
/// The upper triangle is authoritative: the lower triangle shares the same
/// expression trees, so g_ij = g_ji holds structurally.
struct chart_manifold {
    int dimension = 0;
    std::vector<std::string> coordinates;
    std::vector<expr_ast> metric;  // dimension x dimension, row-major
    std::vector<interval> box;     // sampling interval per coordinate

    const expr_ast& metric_entry(int i, int j) const {
        return metric[static_cast<std::size_t>(i) * dimension + j];
    }

    /// Build from expression strings. `rows` is either a full n x n matrix
    /// (entries must be textually symmetric) or the upper triangle only
    /// (row i holds the entries j = i..n-1).
    static chart_manifold from_strings(int dimension,
                                       std::vector<std::string> coordinates,
                                       const std::vector<std::vector<std::string>>& rows,
                                       std::vector<interval> box);
};

struct vector_field_spec {
    std::vector<expr_ast> components;
    std::optional<expr_ast> potential;
};

/// All metric-derived data at one chart point. The metric, its inverse and
/// the Christoffel symbols are kept as jets, so coordinate derivatives up to
/// order-1 (metric: order) can be extracted exactly.
class point_frame {
public:
    int dim() const { return n_; }
    int order() const { return order_; }
    std::span<const double> point() const { return point_; }
    std::span<const std::string> coordinate_names() const { return coords_; }
    std::span<const jet> seeds() const { return seeds_; }
    double det_g() const { return det_; }

    const jet& g_jet(int i, int j) const { return g_[idx2(i, j)]; }
    const jet& ginv_jet(int i, int j) const { return ginv_[idx2(i, j)]; }
    /// Christoffel symbol jet, order-1 lower than the frame order.
    const jet& gamma_jet(int k, int i, int j) const { return gamma_[idx3(k, i, j)]; }

    double g(int i, int j) const { return g_[idx2(i, j)].value(); }
    double ginv(int i, int j) const { return ginv_[idx2(i, j)].value(); }
    double dg(int k, int i, int j) const;
    double d2g(int k, int l, int i, int j) const;
    double d3g(int k, int l, int m, int i, int j) const;
    double gamma(int k, int i, int j) const { return gamma_[idx3(k, i, j)].value(); }
    double dgamma(int l, int k, int i, int j) const;
    double d2gamma(int l, int m, int k, int i, int j) const;

private:
    friend point_frame frame_at(const chart_manifold&, std::span<const double>, int);

    int idx2(int i, int j) const { return i * n_ + j; }
    int idx3(int k, int i, int j) const { return (k * n_ + i) * n_ + j; }

    int n_ = 0;
    int order_ = 0;
    std::vector<double> point_;
    std::vector<std::string> coords_;
    std::vector<jet> seeds_;
    std::vector<jet> g_;
    std::vector<jet> ginv_;
    std::vector<jet> gamma_;
    double det_ = 0.0;
};

/// Evaluate the metric at a chart point and assemble the frame.
/// order selects how many coordinate derivatives the frame carries:
/// 1 -> Christoffels, 2 -> their first derivatives, 3 -> second derivatives.
point_frame frame_at(const chart_manifold& m, std::span<const double> p, int order);

enum class variance : std::uint8_t { covariant, contravariant };

/// Dense tensor of doubles at a base point. Contravariant slots come first
/// in mixed-variance tensors produced by this engine.
struct tensor_value {
    std::vector<variance> signature;
    int dim = 0;
    std::vector<double> components;  // row-major over the slots
    std::vector<double> point;

    int rank() const { return static_cast<int>(signature.size()); }
    double at(std::initializer_list<int> idx) const { return components[flat(idx)]; }
    double& at(std::initializer_list<int> idx) { return components[flat(idx)]; }
    double max_abs() const;

    static tensor_value make(std::vector<variance> signature, int dim,
                             std::span<const double> point);

private:
    std::size_t flat(std::initializer_list<int> idx) const;
};

// ---------------------------------------------------------------------------
// Jet-level cores. Index layouts:
//   rank 2:   a[i*n + j]
//   rank 3:   a[(i*n + j)*n + k]
//   rank 4:   a[((i*n + j)*n + k)*n + l]
// Curvature: up[((l*n+i)*n+j)*n+k] = R^l_ijk with R(e_i,e_j)e_k = R^l_ijk e_l
// under the convention R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z
// - nabla_[X,Y] Z; low[((i*n+j)*n+k)*n+l] = g(R(e_i,e_j)e_k, e_l).
// ---------------------------------------------------------------------------

struct curvature_jets {
    int n = 0;
    std::vector<jet> up;
    std::vector<jet> low;
    const jet& up_at(int l, int i, int j, int k) const {
        return up[((static_cast<std::size_t>(l) * n + i) * n + j) * n + k];
    }
    const jet& low_at(int i, int j, int k, int l) const {
        return low[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
    }
};

struct ricci_jets {
    int n = 0;
    std::vector<jet> ric;  // Ric_ij
    std::vector<jet> q;    // Q^i_j
    jet scal;
};

curvature_jets riemann_jets(const point_frame& f);
ricci_jets ricci_jets_from(const point_frame& f, const curvature_jets& r);

std::vector<jet> evaluate_vector_field(const point_frame& f, const vector_field_spec& v);
std::vector<jet> lie_derivative_metric_jets(const point_frame& f, std::span<const jet> v);
std::vector<jet> nabla_vector_jets(const point_frame& f, std::span<const jet> v);  // (nabla V)^i_j

struct scalar_derivative_jets {
    std::vector<jet> grad;  // contravariant components
    std::vector<jet> hess;  // Hess_ij
    jet laplacian;
};
scalar_derivative_jets scalar_derivatives(const point_frame& f, const jet& s);

jet divergence_vector_jet(const point_frame& f, std::span<const jet> v);
std::vector<jet> divergence_tensor_jets(const point_frame& f, std::span<const jet> t02);
std::vector<jet> nabla_ricci_jets(const point_frame& f, std::span<const jet> ric);
std::vector<jet> nabla_oneform_jets(const point_frame& f, std::span<const jet> psi);  // (nabla_i psi)_j

jet directional_derivative(std::span<const jet> v, const jet& s);  // V(s)
std::vector<jet> lower_index(const point_frame& f, std::span<const jet> v);
std::vector<jet> raise_index(const point_frame& f, std::span<const jet> covector);
jet metric_norm2(const point_frame& f, std::span<const jet> v);  // g(V,V)

// Value-level inner products with the frame's metric.
double tensor02_inner(const point_frame& f, std::span<const double> s,
                      std::span<const double> t);
double tensor11_inner(const point_frame& f, std::span<const double> a,
                      std::span<const double> b);

// ---------------------------------------------------------------------------
// Value-level surface.
// ---------------------------------------------------------------------------

tensor_value riemann(const point_frame& f);           // lowered (0,4)
tensor_value riemann_operator(const point_frame& f);  // (1,3), upper slot first

struct ricci_result {
    tensor_value ricci;           // (0,2)
    tensor_value ricci_operator;  // (1,1)
    double scalar = 0.0;
};
ricci_result ricci_scalar(const point_frame& f);

tensor_value lie_derivative_metric(const point_frame& f, const vector_field_spec& v);
tensor_value covariant_derivative_vector(const point_frame& f, const vector_field_spec& v);

struct hessian_result {
    tensor_value grad;  // (1,0)
    tensor_value hessian;
    double laplacian = 0.0;
};
hessian_result grad_hess_laplacian(const point_frame& f, const expr_ast& scalar_field);

double divergence(const point_frame& f, const vector_field_spec& v);
tensor_value divergence(const point_frame& f, std::span<const jet> t02);

tensor_value kulkarni_nomizu(const tensor_value& t1, const tensor_value& t2);

struct weyl_conharmonic_result {
    tensor_value weyl;         // (0,4)
    tensor_value conharmonic;  // (1,3)
};
weyl_conharmonic_result weyl_conharmonic(const point_frame& f);

tensor_value nabla_ricci(const point_frame& f);  // (0,3): (nabla_i Ric)_jk

struct pairing_result {
    double inner = 0.0;
    double norm2 = 0.0;  // |S|^2
};
pairing_result norms_inner(const point_frame& f, const tensor_value& s,
                           const tensor_value& t);

/// D(X;Y,Z) = Ric(R(V,X)Y, Z) + Ric(Y, R(V,X)Z); the curvature condition
/// R(V,.) . Ric = 0 holds iff this vanishes.
tensor_value curvature_derivation_on_ric(const point_frame& f, const vector_field_spec& v);

}  // namespace sf
