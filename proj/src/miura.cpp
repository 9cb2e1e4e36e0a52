#include "starfield/miura.hpp"

#include <string>

#include "starfield/errors.hpp"

namespace starfield {

namespace {

DiffPoly field(int i, const MultiIndex& sigma = {}) { return DiffPoly::generator(Generator::even(i, sigma)); }

const MultiIndex kX = MultiIndex::single(1);

} // namespace

void MiuraMap::validate() const {
    const JetContext ctx{base_dim, source_fields, false};
    for (const auto& wi : w) {
        ctx.check(wi);
        if (wi.has_exp_atoms()) {
            throw DomainError("Miura substitution must be polynomial");
        }
    }
}

TotalDiffOp pushforward_operator(const HamiltonianOperator& B, const MiuraMap& M) {
    M.validate();
    if (B.fields() != M.source_fields) {
        throw DimensionError("operator acts on " + std::to_string(B.fields()) + " fields but the map has "
                             + std::to_string(M.source_fields) + " source fields");
    }
    const TotalDiffOp l = linearize(M.w, M.source_fields);
    return op_compose(l, op_compose(B.op(), op_adjoint(l)));
}

TotalDiffOp factorization_difference(const HamiltonianOperator& A, const HamiltonianOperator& B,
                                     const MiuraMap& M) {
    if (A.fields() != M.target_fields()) {
        throw DimensionError("operator acts on " + std::to_string(A.fields()) + " fields but the map has "
                             + std::to_string(M.target_fields()) + " target fields");
    }
    return prolong_substitute(A.op(), M.w) - pushforward_operator(B, M);
}

bool verify_factorization(const HamiltonianOperator& A, const HamiltonianOperator& B, const MiuraMap& M) {
    return factorization_difference(A, B, M).is_zero();
}

DiffPoly liouville_residual(const DiffPoly& w, const DiffPoly& rhs) {
    return reduce_on_equation(total_derivative(w, 2), MixedRule{1, 1, 2, rhs});
}

bool liouville_integral_check() {
    const DiffPoly ux = field(1, kX);
    const DiffPoly w = (mul(ux, ux) - field(1, MultiIndex::of({1, 1}))) * Scalar(1, 2);
    const DiffPoly rhs = DiffPoly::generator(Generator::exp_atom({Scalar(2)}));
    return liouville_residual(w, rhs).is_zero();
}

HamiltonianOperator kdv_senior() {
    TotalDiffOp A(1, 1);
    A.add(0, 0, MultiIndex::of({1, 1, 1}), DiffPoly(Scalar(-1, 2)));
    A.add(0, 0, kX, field(1) * Scalar(4));
    A.add(0, 0, {}, field(1, kX) * Scalar(2));
    return HamiltonianOperator(A);
}

HamiltonianOperator kdv_junior() { return HamiltonianOperator(TotalDiffOp::monomial(DiffPoly(Scalar(1, 2)), kX)); }

MiuraMap kdv_miura() { return MiuraMap{1, {mul(field(1), field(1)) * Scalar(2) - field(1, kX)}, 1}; }

std::vector<SuiteCheck> kdv_suite() {
    std::vector<SuiteCheck> out;
    const HamiltonianOperator A2 = kdv_senior();
    const HamiltonianOperator B1 = kdv_junior();

    out.push_back({"(a) A2 = -1/2 D^3 + 4 w D + 2 w_x and B1 = 1/2 D are skew-adjoint",
                   op_adjoint(A2.op()) == -A2.op() && op_adjoint(B1.op()) == -B1.op()});

    const CmeVerdict cme = cme_check(A2);
    out.push_back({"(b) [[P,P]] for A2 is a total derivative", cme.holds && cme.complete});

    out.push_back({"(c) A2 = l_w o B1 o l_w^dagger for w = 2 theta^2 - theta_x",
                   verify_factorization(A2, B1, kdv_miura())});

    out.push_back({"(d) w = 1/2 (u_x^2 - u_xx) is an integral of u_xy = exp(2u)", liouville_integral_check()});

    const DiffPoly w = field(1);
    const DiffPoly grad = euler(mul(w, w) * Scalar(1, 2), Generator::even(1));
    const DiffPoly rhs = op_apply(A2.op(), {grad}).front();
    const DiffPoly expected = field(1, MultiIndex::of({1, 1, 1})) * Scalar(-1, 2) + mul(w, field(1, kX)) * Scalar(6);
    out.push_back({"(e) A2(delta/delta w of 1/2 w^2) = -1/2 w_xxx + 6 w w_x", rhs == expected});
    return out;
}

} // namespace starfield
