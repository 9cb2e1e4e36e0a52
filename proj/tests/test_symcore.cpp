#include <catch_amalgamated.hpp>

#include <algorithm>

#include "starfield/diff_poly.hpp"
#include "starfield/errors.hpp"
#include "starfield/hbar_series.hpp"
#include "support.hpp"

using namespace starfield;
using namespace starfield::testing;

namespace {

DiffPoly ev(int f, std::initializer_list<int> dirs = {}) { return DiffPoly::generator(Generator::even(f, MultiIndex::of(dirs))); }
DiffPoly od(int f, std::initializer_list<int> dirs = {}) { return DiffPoly::generator(Generator::odd(f, MultiIndex::of(dirs))); }

// Sign of sorting a word of distinct keys by bubble sort.
int bubble_sign(std::vector<GenKey> w) {
    int sign = 1;
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = 0; j + 1 < w.size() - i; ++j) {
            if (w[j] > w[j + 1]) {
                std::swap(w[j], w[j + 1]);
                sign = -sign;
            }
        }
    }
    return sign;
}

} // namespace

TEST_CASE("scalars are exact and canonical") {
    CHECK(to_string(parse_scalar("6/4")) == "3/2");
    CHECK(to_string(parse_scalar("-0/7")) == "0");
    CHECK(parse_scalar("123456789012345678901234567890") * 2 == parse_scalar("246913578024691357802469135780"));
    CHECK_THROWS_AS(parse_scalar("1/0"), ParseError);
    CHECK_THROWS_AS(parse_scalar("abc"), ParseError);
    CHECK(factorial(6) == 720);
    CHECK(binomial(6, 2) == 15);
    CHECK(binomial(3, 5) == 0);
}

TEST_CASE("multi-indices count directions") {
    const MultiIndex a = MultiIndex::of({1, 2, 1});
    CHECK(a.order() == 3);
    CHECK(a.count(1) == 2);
    CHECK(a.directions() == std::vector<int>{1, 1, 2});
    CHECK(a.lowered(2) == MultiIndex::of({1, 1}));
    CHECK(a.contains(MultiIndex::of({1, 2})));
    CHECK_FALSE(a.contains(MultiIndex::of({3})));
    CHECK(multi_binomial(a, MultiIndex::single(1)) == 2);
    CHECK(sub_indices(a).size() == 6);
    CHECK(MultiIndex::single(1) < MultiIndex::of({2, 2}));
}

TEST_CASE("generator keys order by kind, field and jet order") {
    const GenKey c = key::make(GenKind::coordinate, 1, {});
    const GenKey u = key::make(GenKind::even, 1, {});
    const GenKey ux = key::make(GenKind::even, 1, MultiIndex::single(1));
    const GenKey u2 = key::make(GenKind::even, 2, {});
    const GenKey xi = key::make(GenKind::odd, 1, {});
    CHECK(c < u);
    CHECK(u < ux);
    CHECK(ux < u2);
    CHECK(u2 < xi);
    CHECK(key::sigma(key::raised(ux, 2)) == MultiIndex::of({1, 2}));
    CHECK(key::field(u2) == 2);
    CHECK_THROWS(Generator::even(0));
    CHECK_THROWS(Generator::even(key::kMaxField + 1));
    CHECK_THROWS(Generator::coordinate(kMaxBaseDim + 1));
}

TEST_CASE("odd generators anticommute") {
    const DiffPoly a = od(1), b = od(1, {1}), c = od(2);
    CHECK((a * a).is_zero());
    CHECK(a * b == -(b * a));
    CHECK((a * b) * c == a * (b * c));
    CHECK((a * ev(1)) == (ev(1) * a));
    CHECK((a + b) * (a + b) == DiffPoly{});
}

TEST_CASE("odd products carry the Koszul sign of the reordering") {
    Rng rng(11);
    std::vector<GenKey> pool;
    for (int f = 1; f <= 3; ++f) {
        for (int d = 0; d < 3; ++d) {
            MultiIndex s;
            for (int k = 0; k < d; ++k) {
                s = s.raised(1);
            }
            pool.push_back(key::make(GenKind::odd, f, s));
        }
    }
    for (int trial = 0; trial < 200; ++trial) {
        std::shuffle(pool.begin(), pool.end(), rng);
        const std::vector<GenKey> word(pool.begin(), pool.begin() + uniform(rng, 1, 6));
        DiffPoly p = 1;
        for (GenKey k : word) {
            p = p * DiffPoly::generator(Generator::from_key(k));
        }
        std::vector<GenKey> sorted = word;
        std::sort(sorted.begin(), sorted.end());
        Monomial m;
        m.odd = sorted;
        CHECK(p == DiffPoly::term(m, bubble_sign(word)));
    }
}

TEST_CASE("ring axioms on random elements") {
    Rng rng(5);
    const DensityShape shape{2, 2, 2, 2, 3, true, true, true};
    for (int t = 0; t < 60; ++t) {
        const DiffPoly a = random_density(rng, shape), b = random_density(rng, shape), c = random_density(rng, shape);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a - a == DiffPoly{});
        const DiffPoly ea = random_density(rng, {2, 2, 2, 2, 3, false, true, true});
        CHECK(ea * b == b * ea);
    }
}

TEST_CASE("exp atoms multiply by adding exponents") {
    const DiffPoly e1 = DiffPoly::generator(Generator::exp_atom({2}));
    const DiffPoly e2 = DiffPoly::generator(Generator::exp_atom({-2}));
    CHECK(e1 * e2 == DiffPoly(1));
    CHECK(power(e1, 3) == DiffPoly::generator(Generator::exp_atom({6})));
    CHECK(partial(e1, Generator::even(1)) == 2 * e1);
    CHECK(partial(e1, Generator::even(1, MultiIndex::single(1))).is_zero());
    CHECK(DiffPoly::generator(Generator::exp_atom({1, 0})) == DiffPoly::generator(Generator::exp_atom({1})));
    CHECK(DiffPoly::generator(Generator::exp_atom({0})) == DiffPoly(1));
}

TEST_CASE("left and right odd derivatives") {
    const DiffPoly a = od(1), b = od(2);
    const DiffPoly p = a * b;
    CHECK(partial(p, Generator::odd(1), Side::left) == b);
    CHECK(partial(p, Generator::odd(1), Side::right) == -b);
    CHECK(partial(p, Generator::odd(2), Side::left) == -a);
    CHECK(partial(p, Generator::odd(2), Side::right) == a);
    // Leibniz rule for an even derivation with odd factors
    const DiffPoly q = ev(1) * ev(1) * a * od(1, {1});
    CHECK(partial(q, Generator::even(1)) == 2 * ev(1) * a * od(1, {1}));
}

TEST_CASE("substitution respects parity") {
    const DiffPoly p = ev(1) * ev(1) + od(1) * ev(2);
    CHECK(substitute(p, {{Generator::even(1), ev(2) + 1}}) == (ev(2) + 1) * (ev(2) + 1) + od(1) * ev(2));
    CHECK_THROWS_AS(substitute(p, {{Generator::even(1), od(2)}}), ParityError);
    CHECK_THROWS_AS(substitute(p, {{Generator::odd(1), ev(2)}}), ParityError);
    const DiffPoly e = DiffPoly::generator(Generator::exp_atom({1}));
    CHECK(substitute(e, {{Generator::even(1), 2 * ev(2)}}) == DiffPoly::generator(Generator::exp_atom({0, 2})));
    CHECK_THROWS_AS(substitute(e, {{Generator::even(1), ev(2) * ev(2)}}), DomainError);
}

TEST_CASE("hbar series truncate to the smaller order") {
    const HbarSeries a({ev(1), DiffPoly(1), DiffPoly(2)});
    const HbarSeries b({ev(2), ev(1)});
    const HbarSeries s = a + b;
    CHECK(s.order() == 1);
    CHECK(s[1] == ev(1) + 1);
    const HbarSeries p = mul(a, b);
    CHECK(p.order() == 1);
    CHECK(p[1] == ev(1) * ev(1) + ev(2));
    CHECK((a - a).is_zero());
    CHECK(a.truncated(0).order() == 0);
    CHECK_THROWS(HbarSeries(-1));
}

TEST_CASE("graded commutativity and the graded Leibniz rule") {
    Rng rng(77);
    // homogeneous random elements: every term has the same odd degree
    std::vector<DiffPoly> odd_pool{od(1), od(1, {1}), od(1, {2}), od(2), od(2, {1, 1})};
    auto homogeneous = [&](int odd_degree) {
        DiffPoly p;
        for (int t = 0; t < 3; ++t) {
            std::shuffle(odd_pool.begin(), odd_pool.end(), rng);
            DiffPoly m = random_density(rng, {2, 2, 2, 2, 1, false, true, true});
            for (int k = 0; k < odd_degree; ++k) {
                m = m * odd_pool[static_cast<std::size_t>(k)];
            }
            p += m;
        }
        return p;
    };
    for (int t = 0; t < 60; ++t) {
        const int da = uniform(rng, 0, 2), db = uniform(rng, 0, 2);
        DiffPoly a = homogeneous(da), b = homogeneous(db);
        if (!a.odd_degree() || !b.odd_degree()) {
            continue;
        }
        const int sa = *a.odd_degree(), sb = *b.odd_degree();
        CHECK(a * b == ((sa * sb) % 2 ? -(b * a) : b * a));
        // Koszul sign when an odd derivation passes a
        const Generator g = Generator::odd(uniform(rng, 1, 2));
        CHECK(partial(a * b, g, Side::left) == partial(a, g, Side::left) * b + (sa % 2 ? -a : a) * partial(b, g, Side::left));
        CHECK(partial(a * b, g, Side::right) == a * partial(b, g, Side::right) + partial(a, g, Side::right) * (sb % 2 ? -b : b));
        // left and right derivatives of a homogeneous element differ by (-1)^(deg-1)
        if (sa > 0) {
            const DiffPoly l = partial(a, g, Side::left), r = partial(a, g, Side::right);
            CHECK(r == ((sa - 1) % 2 ? -l : l));
        }
        const Generator e = Generator::even(1, MultiIndex::single(uniform(rng, 1, 2)));
        CHECK(partial(a * b, e) == partial(a, e) * b + a * partial(b, e));
    }
}

TEST_CASE("canonical form is stable") {
    Rng rng(78);
    for (int t = 0; t < 30; ++t) {
        const DiffPoly p = random_density(rng, {2, 2, 2, 3, 4, true, true, true});
        DiffPoly q;
        for (const auto& [m, c] : p.terms()) {
            q.add_term(m, c);
        }
        CHECK(q == p);
        CHECK(p * DiffPoly(1) == p);
        CHECK(p + DiffPoly{} == p);
    }
}
