#pragma once

#include <string>
#include <vector>

#include "starfield/varpoisson.hpp"

namespace starfield {

/// Differential substitution w^i = w^i(x,[u]) from `source_fields` fields u to
/// w.size() fields w, over a one-dimensional base unless stated otherwise.
struct MiuraMap {
    int source_fields = 1;
    std::vector<DiffPoly> w;
    int base_dim = 1;

    int target_fields() const { return static_cast<int>(w.size()); }
    /// Throws unless every w^i is an even polynomial in the source jets.
    void validate() const;
};

/// l_w o B o l_w^dagger, an operator over [u] acting on w-covectors.
TotalDiffOp pushforward_operator(const HamiltonianOperator& B, const MiuraMap& M);

/// A with every w-jet replaced by its prolonged substitution, minus the
/// pushforward of B; zero iff the factorization holds.
TotalDiffOp factorization_difference(const HamiltonianOperator& A, const HamiltonianOperator& B,
                                     const MiuraMap& M);
bool verify_factorization(const HamiltonianOperator& A, const HamiltonianOperator& B, const MiuraMap& M);

/// D_y(w) reduced on the equation u_xy = rhs (x = direction 1, y = 2).
DiffPoly liouville_residual(const DiffPoly& w, const DiffPoly& rhs);
/// w = 1/2 (u_x^2 - u_xx) is conserved along y on u_xy = exp(2u).
bool liouville_integral_check();

/// -1/2 D^3 + 4 w D + 2 w_x
HamiltonianOperator kdv_senior();
/// 1/2 D
HamiltonianOperator kdv_junior();
/// w = 2 theta^2 - theta_x (theta is field 1 of the source)
MiuraMap kdv_miura();

struct SuiteCheck {
    std::string label;
    bool passed = false;
};

std::vector<SuiteCheck> kdv_suite();

} // namespace starfield
