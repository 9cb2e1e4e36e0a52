#include <catch_amalgamated.hpp>

#include "starfield/errors.hpp"
#include "starfield/miura.hpp"
#include "starfield/total_diff_op.hpp"
#include "starfield/varpoisson.hpp"
#include "support.hpp"

using namespace starfield;
using namespace starfield::testing;

namespace {

DiffPoly ev(int f, std::initializer_list<int> dirs = {}) { return DiffPoly::generator(Generator::even(f, MultiIndex::of(dirs))); }
DiffPoly od(int f, std::initializer_list<int> dirs = {}) { return DiffPoly::generator(Generator::odd(f, MultiIndex::of(dirs))); }
MultiIndex Dk(int k) {
    MultiIndex m;
    for (int i = 0; i < k; ++i) {
        m = m.raised(1);
    }
    return m;
}

TotalDiffOp random_op(Rng& rng, int n, int max_order, bool field_free = false) {
    TotalDiffOp A(n, n);
    const DensityShape shape{n, 1, 1, field_free ? 0 : 2, 2, false, false, false};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k <= max_order; ++k) {
                if (uniform(rng, 0, 1)) {
                    A.add(i, j, Dk(k), random_density(rng, shape));
                }
            }
        }
    }
    return A;
}

TotalDiffOp skew_part(const TotalDiffOp& B) { return B - op_adjoint(B); }

HamiltonianOperator op1(const DiffPoly& c, int k) { return HamiltonianOperator(TotalDiffOp::monomial(c, Dk(k))); }

} // namespace

TEST_CASE("operator algebra basics") {
    const TotalDiffOp D = TotalDiffOp::monomial(1, Dk(1));
    const TotalDiffOp U = TotalDiffOp::monomial(ev(1), {});
    TotalDiffOp expected(1, 1);
    expected.add(0, 0, Dk(1), ev(1));
    expected.add(0, 0, {}, ev(1, {1}));
    CHECK(op_compose(D, U) == expected);
    CHECK(op_adjoint(TotalDiffOp::monomial(ev(1), Dk(1))) == -expected);
    CHECK(op_apply(D, {ev(1) * ev(1)})[0] == 2 * ev(1) * ev(1, {1}));
    CHECK((D - D).is_zero());
    CHECK(TotalDiffOp::identity(2).entry(1, 1).at({}) == DiffPoly(1));
    TotalDiffOp A(2, 2);
    CHECK_THROWS_AS(A.add(2, 0, {}, 1), DimensionError);
    CHECK_THROWS_AS(A.add(0, 0, {}, DiffPoly::generator(Generator::exp_atom({1}))), DomainError);
    CHECK_THROWS_AS(op_compose(TotalDiffOp(1, 2), TotalDiffOp(1, 2)), DimensionError);
    CHECK_THROWS_AS(op_apply(A, {ev(1)}), DimensionError);
    CHECK_THROWS_AS(TotalDiffOp(-1, 1), DimensionError);
}

TEST_CASE("composition and adjoint laws on random operators") {
    Rng rng(61);
    for (int t = 0; t < 20; ++t) {
        const int n = uniform(rng, 1, 2);
        const TotalDiffOp A = random_op(rng, n, 2), B = random_op(rng, n, 2);
        std::vector<DiffPoly> v;
        for (int i = 0; i < n; ++i) {
            v.push_back(random_density(rng, {n, 1, 2, 2, 2, false, false, false}));
        }
        CHECK(op_apply(op_compose(A, B), v) == op_apply(A, op_apply(B, v)));
        CHECK(op_adjoint(op_adjoint(A)) == A);
        CHECK(op_adjoint(op_compose(A, B)) == op_compose(op_adjoint(B), op_adjoint(A)));
        // <v, A w> - <A^dagger v, w> is a total derivative
        std::vector<DiffPoly> w;
        for (int i = 0; i < n; ++i) {
            w.push_back(random_density(rng, {n, 1, 2, 2, 2, false, false, false}));
        }
        const auto Aw = op_apply(A, w);
        const auto Atv = op_apply(op_adjoint(A), v);
        DiffPoly pairing;
        for (int i = 0; i < n; ++i) {
            pairing += v[i] * Aw[i] - Atv[i] * w[i];
        }
        CHECK(is_total_divergence(pairing, {1, n, false}).is_divergence);
    }
}

TEST_CASE("linearization") {
    const TotalDiffOp l = linearize({ev(1) * ev(1) + ev(1, {1}) * ev(2)}, 2);
    CHECK(l.entry(0, 0).at({}) == 2 * ev(1));
    CHECK(l.entry(0, 0).at(Dk(1)) == ev(2));
    CHECK(l.entry(0, 1).at({}) == ev(1, {1}));
    CHECK_THROWS_AS(linearize({ev(3)}, 2), DimensionError);
    CHECK_THROWS_AS(linearize({od(1)}, 1), DomainError);
}

TEST_CASE("Hamiltonian operators must be square and skew") {
    CHECK_THROWS_AS(HamiltonianOperator(TotalDiffOp(1, 2)), DomainError);
    CHECK_THROWS_AS(op1(1, 2), DomainError);
    CHECK_THROWS_AS(op1(ev(1), 1), DomainError);
    CHECK_NOTHROW(op1(1, 3));
    CHECK_THROWS_AS(HamiltonianOperator(TotalDiffOp::monomial(1, Dk(1)), 0), DimensionError);
    CHECK(op1(1, 1).has_field_free_coefficients());
    CHECK_FALSE(kdv_senior().has_field_free_coefficients());
}

TEST_CASE("variational bracket") {
    const HamiltonianOperator D = op1(1, 1);
    const JetContext ctx{1, 1, false};
    const LocalFunctional F{ev(1) * ev(1) * ev(1)}, G{Scalar(1, 2) * ev(1, {1}) * ev(1, {1})};
    // {F, G} = 3u^2 D(-u_xx)
    CHECK(var_bracket(D, F, G).density == -3 * ev(1) * ev(1) * ev(1, {1, 1, 1}));
    CHECK(is_total_divergence(var_bracket(D, F, LocalFunctional{Scalar(1, 2) * ev(1) * ev(1)}).density, ctx));
    CHECK(variational_gradient(G.density, 1)[0] == -ev(1, {1, 1}));
    CHECK(odd_fields(2) == std::vector<DiffPoly>{od(1), od(2)});
    CHECK_THROWS_AS(var_bracket(D, LocalFunctional{ev(2)}, G), DimensionError);
}

TEST_CASE("classical master-equation verdicts") {
    SECTION("KdV structures") {
        const CmeVerdict v = cme_check(kdv_senior());
        CHECK(v.holds);
        CHECK(v.complete);
        CHECK(v.residual == -2 * od(1) * od(1, {1}) * od(1, {1, 1, 1}));
        CHECK(var_schouten_self(bivector_of(kdv_senior())).density == v.residual);
        CHECK(cme_check(kdv_junior()).holds);
        CHECK(cme_check(op1(1, 3)).holds);
    }
    SECTION("first-order hydrodynamic operator") {
        TotalDiffOp A = TotalDiffOp::monomial(ev(1), Dk(1));
        A.add(0, 0, {}, Scalar(1, 2) * ev(1, {1}));
        CHECK(cme_check(HamiltonianOperator(A)).holds);
    }
    SECTION("a skew operator that is not Hamiltonian") {
        TotalDiffOp A = kdv_senior().op();
        A.add(0, 0, Dk(1), ev(1) * ev(1));
        A.add(0, 0, {}, ev(1) * ev(1, {1}));
        const CmeVerdict v = cme_check(HamiltonianOperator(A));
        CHECK_FALSE(v.holds);
        CHECK(v.residual
              == -2 * od(1) * od(1, {1}) * od(1, {1, 1, 1}) - ev(1) * od(1) * od(1, {1}) * od(1, {1, 1, 1}));
    }
    SECTION("constant-coefficient operators always pass") {
        Rng rng(71);
        for (int t = 0; t < 10; ++t) {
            const int n = uniform(rng, 1, 3);
            const HamiltonianOperator A(skew_part(random_op(rng, n, 3, true)));
            const CmeVerdict v = cme_check(A);
            CHECK(v.holds);
            CHECK(v.residual.is_zero());
        }
    }
    SECTION("two base directions") {
        TotalDiffOp A(1, 1);
        A.add(0, 0, MultiIndex::single(1), 1);
        A.add(0, 0, MultiIndex::single(2), 1);
        CHECK(cme_check(HamiltonianOperator(A, 2)).holds);
    }
}
