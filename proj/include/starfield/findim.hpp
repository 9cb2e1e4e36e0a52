#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "starfield/diff_poly.hpp"
#include "starfield/graphs.hpp"
#include "starfield/hbar_series.hpp"

namespace starfield {

/// Skew bivector on affine n-space; P^{ij} for i<j is stored, P^{ji} = -P^{ij}.
/// Components are polynomials in the undifferentiated fields u^1..u^n.
class Bivector {
public:
    explicit Bivector(int dim);

    int dim() const { return dim_; }
    /// Sets P^{ij} (and implicitly P^{ji}); i != j.
    void set(int i, int j, const DiffPoly& value);
    DiffPoly operator()(int i, int j) const;
    /// Nonzero components with i<j.
    const std::map<std::pair<int, int>, DiffPoly>& components() const { return components_; }
    bool is_constant() const;
    /// The odd representation 1/2 xi_i P^{ij} xi_j.
    DiffPoly odd_form() const;

    friend bool operator==(const Bivector&, const Bivector&) = default;

private:
    int dim_;
    std::map<std::pair<int, int>, DiffPoly> components_;
};

/// Throws unless p is a polynomial in u^1..u^n (DimensionError for a larger
/// field index, DomainError for jets, odd symbols, coordinates or atoms).
void require_function_of_u(const DiffPoly& p, int n);

/// Shorthand for u^i as a DiffPoly.
DiffPoly u(int i);

DiffPoly poisson_bracket(const Bivector& P, const DiffPoly& f, const DiffPoly& g);

/// {{f,g},h} + {{g,h},f} + {{h,f},g}.
DiffPoly jacobiator(const Bivector& P, const DiffPoly& f, const DiffPoly& g, const DiffPoly& h);

using Trivector = std::map<std::array<int, 3>, DiffPoly>;

/// Coefficients i<j<k of  d_l P^{ij} P^{lk} + d_l P^{jk} P^{li} + d_l P^{ki} P^{lj};
/// zero entries are omitted.
Trivector jacobiator_components(const Bivector& P);

/// Components (i<j<k, coefficient of xi_i xi_j xi_k) of
/// (P) <-d/du^i . d/dxi_i-> (Q) - (P) <-d/dxi_i . d/du^i-> (Q)
/// on the odd forms. For Q = P this is twice jacobiator_components.
Trivector schouten(const Bivector& P, const Bivector& Q);

/// Sum over edge labellings of the product of differentiated vertex contents.
DiffPoly eval_graph(const KontsevichGraph& g, const Bivector& P, const std::vector<DiffPoly>& args);
DiffPoly eval_graph_sum(const SignedGraphSum& sum, const Bivector& P, const std::vector<DiffPoly>& args);

/// The five graphs of the order-2 expansion with their weights.
const std::vector<std::pair<KontsevichGraph, Scalar>>& star2_graphs();

/// Bidifferential coefficient B_k(f,g) of the order-2 star-product, k <= 2.
DiffPoly star2_term(const Bivector& P, int k, const DiffPoly& f, const DiffPoly& g);
HbarSeries star2(const Bivector& P, const DiffPoly& f, const DiffPoly& g);

/// Moyal product exp(hbar <-d_i M^{ij} d_j->) truncated at K for any constant
/// matrix M (rows/cols indexed 1..n as M[i-1][j-1]).
using ConstantMatrix = std::vector<std::vector<Scalar>>;
HbarSeries moyal_matrix(const ConstantMatrix& M, const DiffPoly& f, const DiffPoly& g, int K);
/// Moyal product of a constant bivector; DomainError if any component varies.
HbarSeries moyal(const Bivector& P, const DiffPoly& f, const DiffPoly& g, int K);

enum class StarMode { general_order2, constant_moyal };

struct StarProductTruncation {
    Bivector P;
    int K = 2;
    StarMode mode = StarMode::general_order2;
};

/// Validates the truncation (order <= 2 for general mode, constant
/// coefficients for Moyal mode); throws DomainError.
void validate(const StarProductTruncation& S);

/// Star-product of truncated series, terms beyond the smallest order dropped.
HbarSeries star(const StarProductTruncation& S, const HbarSeries& a, const HbarSeries& b);
HbarSeries star(const StarProductTruncation& S, const DiffPoly& f, const DiffPoly& g);

/// (f*g)*h - f*(g*h).
HbarSeries associator(const StarProductTruncation& S, const DiffPoly& f, const DiffPoly& g,
                      const DiffPoly& h);

/// Constant c in  Assoc(f,g,h) = c Jac(f,g,h) + o(hbar^2)  for the cyclic
/// Jacobiator normalization above.
Scalar factorization_constant();

/// hbar^2 coefficient of the order-2 associator minus c * jacobiator.
DiffPoly factorization_residual(const Bivector& P, const DiffPoly& f, const DiffPoly& g,
                                const DiffPoly& h);

} // namespace starfield
