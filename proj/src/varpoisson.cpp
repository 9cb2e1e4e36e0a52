#include "starfield/varpoisson.hpp"

#include <string>

#include "starfield/errors.hpp"

namespace starfield {

HamiltonianOperator::HamiltonianOperator(TotalDiffOp A, int base_dim)
    : A_(std::move(A)), base_dim_(base_dim) {
    if (A_.rows() != A_.cols()) {
        throw DomainError("Hamiltonian operator must be square");
    }
    if (base_dim < 1 || base_dim > kMaxBaseDim) {
        throw DimensionError("base dimension out of range");
    }
    if (!(op_adjoint(A_) == -A_)) {
        throw DomainError("operator is not skew-adjoint");
    }
}

bool HamiltonianOperator::has_field_free_coefficients() const {
    for (int i = 0; i < fields(); ++i) {
        for (int j = 0; j < fields(); ++j) {
            for (const auto& [tau, c] : A_.entry(i, j)) {
                for (GenKey k : c.generator_keys()) {
                    if (key::kind(k) != GenKind::coordinate) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

std::vector<DiffPoly> odd_fields(int n) {
    std::vector<DiffPoly> xi;
    for (int i = 1; i <= n; ++i) {
        xi.push_back(DiffPoly::generator(Generator::odd(i)));
    }
    return xi;
}

VariationalBivector bivector_of(const HamiltonianOperator& A) {
    const int n = A.fields();
    const std::vector<DiffPoly> xi = odd_fields(n);
    const std::vector<DiffPoly> Axi = op_apply(A.op(), xi);
    DiffPoly density;
    for (int i = 0; i < n; ++i) {
        density += mul(xi[static_cast<std::size_t>(i)], Axi[static_cast<std::size_t>(i)]);
    }
    density *= Scalar(1, 2);
    return {density, n, A.base_dim()};
}

std::vector<DiffPoly> variational_gradient(const DiffPoly& density, int fields) {
    std::vector<DiffPoly> out;
    for (int i = 1; i <= fields; ++i) {
        out.push_back(euler(density, Generator::even(i)));
    }
    return out;
}

LocalFunctional var_bracket(const HamiltonianOperator& A, const LocalFunctional& F,
                            const LocalFunctional& G) {
    const JetContext ctx{A.base_dim(), A.fields(), false};
    ctx.check(F.density);
    ctx.check(G.density);
    const auto dF = variational_gradient(F.density, A.fields());
    const auto AdG = op_apply(A.op(), variational_gradient(G.density, A.fields()));
    DiffPoly density;
    for (std::size_t i = 0; i < dF.size(); ++i) {
        density += mul(dF[i], AdG[i]);
    }
    return {density};
}

LocalFunctional var_schouten_self(const VariationalBivector& P) {
    DiffPoly density;
    for (int i = 1; i <= P.fields; ++i) {
        const Generator ui = Generator::even(i);
        const Generator xi = Generator::odd(i);
        density += mul(euler(P.density, ui), euler(P.density, xi, Side::left));
        density -= mul(euler(P.density, xi, Side::right), euler(P.density, ui));
    }
    return {density};
}

CmeVerdict cme_check(const HamiltonianOperator& A) {
    const DiffPoly residual = var_schouten_self(bivector_of(A)).density;
    const DivergenceVerdict v = is_total_divergence(residual, A.context());
    return {v.is_divergence, v.complete, residual};
}

} // namespace starfield
