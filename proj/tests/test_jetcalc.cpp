#include <catch_amalgamated.hpp>

#include "starfield/errors.hpp"
#include "starfield/jet.hpp"
#include "support.hpp"

using namespace starfield;
using namespace starfield::testing;

namespace {

DiffPoly ev(int f, std::initializer_list<int> dirs = {}) { return DiffPoly::generator(Generator::even(f, MultiIndex::of(dirs))); }
DiffPoly od(int f, std::initializer_list<int> dirs = {}) { return DiffPoly::generator(Generator::odd(f, MultiIndex::of(dirs))); }
DiffPoly x(int a) { return DiffPoly::generator(Generator::coordinate(a)); }
DiffPoly ex(std::vector<Scalar> l) { return DiffPoly::generator(Generator::exp_atom(std::move(l))); }

} // namespace

TEST_CASE("total derivative on generators") {
    CHECK(total_derivative(ev(1), 1) == ev(1, {1}));
    CHECK(total_derivative(ev(2, {1}), 2) == ev(2, {1, 2}));
    CHECK(total_derivative(x(1), 1) == DiffPoly(1));
    CHECK(total_derivative(x(1), 2).is_zero());
    CHECK(total_derivative(od(1), 1) == od(1, {1}));
    CHECK(total_derivative(ex({2}), 1) == 2 * ev(1, {1}) * ex({2}));
    CHECK(total_derivative(DiffPoly(7), 3).is_zero());
    CHECK_THROWS_AS(total_derivative(ev(1), 0), DimensionError);
    CHECK_THROWS_AS(total_derivative(ev(1), kMaxBaseDim + 1), DimensionError);
}

TEST_CASE("total derivative is a graded derivation and derivatives commute") {
    Rng rng(31);
    const DensityShape shape{2, 3, 2, 2, 3, true, true, true};
    for (int t = 0; t < 40; ++t) {
        const DiffPoly a = random_density(rng, shape), b = random_density(rng, shape);
        const int i = uniform(rng, 1, 3), j = uniform(rng, 1, 3);
        CHECK(total_derivative(total_derivative(a, i), j) == total_derivative(total_derivative(a, j), i));
        CHECK(total_derivative(a * b, i) == total_derivative(a, i) * b + a * total_derivative(b, i));
        CHECK(total_derivative(a, MultiIndex::of({1, 2})) == total_derivative(total_derivative(a, 2), 1));
    }
}

TEST_CASE("Euler operator") {
    const Generator u1 = Generator::even(1);
    CHECK(euler(Scalar(1, 2) * ev(1, {1}) * ev(1, {1}), u1) == -ev(1, {1, 1}));
    CHECK(euler(ev(1) * ev(1) * ev(1), u1) == 3 * ev(1) * ev(1));
    CHECK(euler(ex({1}), u1) == ex({1}));
    CHECK(euler(x(1) * ev(1, {1}), u1) == DiffPoly(-1));
    CHECK(euler(ev(2), u1).is_zero());
    CHECK_THROWS_AS(euler(ev(1), Generator::even(1, MultiIndex::single(1))), DomainError);
    // odd fields: left and right derivatives differ by sign on odd degree 2
    const DiffPoly p = od(1) * od(1, {1, 1, 1});
    const DiffPoly l = euler(p, Generator::odd(1), Side::left);
    const DiffPoly r = euler(p, Generator::odd(1), Side::right);
    CHECK(l == 2 * od(1, {1, 1, 1}));
    CHECK(r == -l);
}

TEST_CASE("Euler operator kills total derivatives") {
    Rng rng(41);
    for (int t = 0; t < 50; ++t) {
        const int m = uniform(rng, 1, 3);
        const DensityShape shape{2, m, 2, 3, 3, true, true, true};
        const DiffPoly q = random_density(rng, shape);
        const DiffPoly p = total_derivative(q, uniform(rng, 1, m));
        for (int f = 1; f <= 2; ++f) {
            CHECK(euler(p, Generator::even(f)).is_zero());
            CHECK(euler(p, Generator::odd(f)).is_zero());
        }
    }
}

TEST_CASE("total divergence in one dimension") {
    const JetContext ctx{1, 1, true};
    CHECK(is_total_divergence(ev(1, {1}) * ev(1, {1, 1}), ctx).is_divergence);
    CHECK_FALSE(is_total_divergence(ev(1) * ev(1), ctx).is_divergence);
    CHECK(is_total_divergence(DiffPoly{}, ctx).is_divergence);
    CHECK(is_total_divergence(od(1) * od(1, {1, 1}), ctx).is_divergence); // D(xi xi_x)
    CHECK_FALSE(is_total_divergence(od(1) * od(1, {1}), ctx).is_divergence);
    CHECK_FALSE(is_total_divergence(od(1) * od(1, {1, 1, 1}), ctx).is_divergence);
    const DiffPoly w = total_derivative(od(1) * od(1, {1}) * od(1, {1, 1}), 1);
    CHECK(is_total_divergence(w, ctx).is_divergence);
    CHECK_THROWS_AS(is_total_divergence(ev(2), ctx), DimensionError);
    CHECK_THROWS_AS(is_total_divergence(ev(1, {2}), ctx), DimensionError);
    CHECK_THROWS_AS(is_total_divergence(od(1), JetContext{1, 1, false}), DimensionError);
}

TEST_CASE("divergence witnesses in several dimensions") {
    Rng rng(43);
    const JetContext ctx{2, 1, false};
    for (int t = 0; t < 20; ++t) {
        const DensityShape shape{1, 2, 1, 2, 2, false, false, false};
        const DiffPoly p = total_derivative(random_density(rng, shape), 1)
                           + total_derivative(random_density(rng, shape), 2);
        const DivergenceVerdict v = is_total_divergence(p, ctx);
        CHECK(v.is_divergence);
        if (v.witness) {
            DiffPoly sum;
            for (int a = 1; a <= 2; ++a) {
                sum += total_derivative((*v.witness)[static_cast<std::size_t>(a - 1)], a);
            }
            CHECK(sum == p);
        }
        CHECK(v.complete == v.witness.has_value());
    }
    const DivergenceVerdict no = is_total_divergence(ev(1) * ev(1), ctx);
    CHECK_FALSE(no.is_divergence);
    CHECK(no.complete);
}

TEST_CASE("functionals compare modulo divergences") {
    const JetContext ctx{1, 1, false};
    const LocalFunctional F{ev(1) * ev(1, {1, 1})};
    const LocalFunctional G{-ev(1, {1}) * ev(1, {1})};
    CHECK(functional_equal(F, G, ctx).is_divergence);
    CHECK_FALSE(functional_equal(F, LocalFunctional{ev(1) * ev(1)}, ctx).is_divergence);
}

TEST_CASE("reduction on a hyperbolic equation") {
    const MixedRule rule{1, 1, 2, ex({2})};
    CHECK(reduce_on_equation(ev(1, {1, 2}), rule) == ex({2}));
    CHECK(reduce_on_equation(ev(1, {1, 1, 2}), rule) == 2 * ev(1, {1}) * ex({2}));
    CHECK(reduce_on_equation(ev(1, {1, 2, 2}), rule) == 2 * ev(1, {2}) * ex({2}));
    CHECK(reduce_on_equation(ev(1, {1, 1}), rule) == ev(1, {1, 1}));
    CHECK_THROWS_AS(reduce_on_equation(ev(1), MixedRule{1, 1, 1, ex({2})}), DomainError);
    CHECK_THROWS_AS(reduce_on_equation(ev(1), MixedRule{1, 1, 2, ev(1, {1, 2})}), DomainError);
}

TEST_CASE("prolonged substitution") {
    const std::vector<DiffPoly> w{ev(1) * ev(1)};
    CHECK(prolong_substitute(ev(1, {1}), w) == 2 * ev(1) * ev(1, {1}));
    CHECK(prolong_substitute(ev(1) * ev(1, {1, 1}), w)
          == ev(1) * ev(1) * (2 * ev(1, {1}) * ev(1, {1}) + 2 * ev(1) * ev(1, {1, 1})));
    Rng rng(47);
    for (int t = 0; t < 20; ++t) {
        const DensityShape shape{1, 1, 2, 2, 3, false, false, false};
        const DiffPoly p = random_density(rng, shape);
        const std::vector<DiffPoly> sub{random_density(rng, shape)};
        CHECK(prolong_substitute(total_derivative(p, 1), sub) == total_derivative(prolong_substitute(p, sub), 1));
    }
}

TEST_CASE("one-dimensional divergences have witnesses") {
    Rng rng(53);
    const JetContext ctx{1, 2, true};
    for (int t = 0; t < 30; ++t) {
        const DensityShape shape{2, 1, 2, 3, 3, t % 2 == 0, false, false};
        const DiffPoly p = total_derivative(random_density(rng, shape), 1);
        const auto w = divergence_witness(p, ctx);
        REQUIRE(w.has_value());
        CHECK(total_derivative(w->front(), 1) == p);
    }
}
