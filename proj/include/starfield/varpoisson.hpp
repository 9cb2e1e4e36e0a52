#pragma once

#include <vector>

#include "starfield/jet.hpp"
#include "starfield/total_diff_op.hpp"

namespace starfield {

/// Square skew-adjoint matrix operator on `fields()` components over a base of
/// dimension base_dim.
class HamiltonianOperator {
public:
    /// Throws DomainError if A is not square or not skew-adjoint.
    explicit HamiltonianOperator(TotalDiffOp A, int base_dim = 1);

    const TotalDiffOp& op() const { return A_; }
    int fields() const { return A_.rows(); }
    int base_dim() const { return base_dim_; }
    JetContext context() const { return {base_dim_, fields(), true}; }
    /// True when every coefficient depends on x alone.
    bool has_field_free_coefficients() const;

private:
    TotalDiffOp A_;
    int base_dim_;
};

/// Density 1/2 xi_i (A xi)_i of the variational bivector.
struct VariationalBivector {
    DiffPoly density;
    int fields = 1;
    int base_dim = 1;
};

VariationalBivector bivector_of(const HamiltonianOperator& A);

/// (delta/delta u^1, ..., delta/delta u^n) of a density.
std::vector<DiffPoly> variational_gradient(const DiffPoly& density, int fields);

/// The odd vector (xi_1, ..., xi_n).
std::vector<DiffPoly> odd_fields(int n);

/// Density  sum_i dF/du^i (A dG/du)_i.
LocalFunctional var_bracket(const HamiltonianOperator& A, const LocalFunctional& F,
                            const LocalFunctional& G);

/// Density  sum_i [ (P) <-delta/delta u^i . ->delta/delta xi_i (P)
///                 - (P) <-delta/delta xi_i . ->delta/delta u^i (P) ],
/// which for an even bivector equals 2 sum_i (delta P/delta u^i)(delta P/delta xi_i).
LocalFunctional var_schouten_self(const VariationalBivector& P);

struct CmeVerdict {
    bool holds = false;
    bool complete = true;
    DiffPoly residual; // the Schouten density
};

CmeVerdict cme_check(const HamiltonianOperator& A);

} // namespace starfield
