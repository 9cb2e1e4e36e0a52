#include <catch_amalgamated.hpp>

#include "starfield/errors.hpp"
#include "starfield/findim.hpp"
#include "starfield/graphs.hpp"
#include "support.hpp"

using namespace starfield;
using namespace starfield::testing;

namespace {

// Every graph with the given sinks and internal vertex count, no tadpoles.
std::vector<KontsevichGraph> all_graphs(int sinks, int internal, bool ordered) {
    const int n = sinks + internal;
    std::vector<KontsevichGraph> out{{sinks, {}}};
    for (int v = 0; v < internal; ++v) {
        std::vector<KontsevichGraph> next;
        for (const auto& g : out) {
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    if (a != b && (ordered || a < b) && a != sinks + v && b != sinks + v) {
                        KontsevichGraph h = g;
                        h.edges.push_back({a, b});
                        next.push_back(h);
                    }
                }
            }
        }
        out = std::move(next);
    }
    return out;
}

} // namespace

TEST_CASE("admissibility") {
    CHECK(is_admissible({2, {{0, 1}}}));
    CHECK_FALSE(is_admissible({2, {{0, 0}}}));
    CHECK_FALSE(is_admissible({2, {{2, 1}}}));
    CHECK_FALSE(is_admissible({2, {{0, 5}}}));
    CHECK_FALSE(is_admissible({0, {}}));
    CHECK_THROWS_AS(normalize({2, {{1, 1}}}), DomainError);
}

TEST_CASE("normalization flips the sign per swapped edge pair") {
    const NormalizedGraph a = normalize({2, {{1, 0}}});
    CHECK(a.graph == KontsevichGraph{2, {{0, 1}}});
    CHECK(a.sign == -1);
    const NormalizedGraph b = normalize({2, {{0, 1}}});
    CHECK(b.sign == 1);
    // relabelling internal vertices gives the same canonical form
    const NormalizedGraph c = normalize({3, {{0, 4}, {1, 2}}});
    const NormalizedGraph d = normalize({3, {{1, 2}, {0, 3}}});
    CHECK(c.graph == d.graph);
    CHECK(c.sign == d.sign);
}

TEST_CASE("normalization agrees with evaluation on every small graph") {
    Rng rng(3);
    const Bivector P = random_bivector(rng, 3, 2);
    const std::vector<DiffPoly> args{random_poly(rng, 3, 3, 3), random_poly(rng, 3, 3, 3)};
    int orientation_reversing = 0;
    std::vector<KontsevichGraph> graphs = all_graphs(2, 2, true);
    for (const auto& g : all_graphs(2, 3, false)) {
        graphs.push_back(g);
    }
    for (const auto& g : graphs) {
        if (!is_admissible(g)) {
            continue;
        }
        const NormalizedGraph n = normalize(g);
        const DiffPoly direct = eval_graph(g, P, args);
        if (n.sign == 0) {
            ++orientation_reversing;
            CHECK(direct.is_zero());
        } else {
            CHECK(direct == n.sign * eval_graph(n.graph, P, args));
        }
        const NormalizedGraph again = normalize(n.graph);
        CHECK(again.graph == n.graph);
        CHECK(again.sign == (n.sign == 0 ? 0 : 1));
        for (std::size_t v = 0; v < g.edges.size(); ++v) {
            KontsevichGraph flipped = g;
            std::swap(flipped.edges[v][0], flipped.edges[v][1]);
            CHECK(eval_graph(flipped, P, args) == -direct);
        }
    }
    CHECK(orientation_reversing > 0);
}

TEST_CASE("accumulate cancels opposite orientations") {
    SignedGraphSum s;
    accumulate(s, {2, {{0, 1}}}, 1);
    accumulate(s, {2, {{1, 0}}}, 1);
    CHECK(s.empty());
    accumulate(s, {2, {{1, 1}}}, 1);
    CHECK(s.empty());
}

TEST_CASE("bare Jacobiator expands into the cyclic three-term sum") {
    // d_l P^{ij} P^{lk} over the rotations of (0,1,2): vertex 3 = P^{ij},
    // vertex 4 = P^{lk} with its first arrow on vertex 3.
    SignedGraphSum expected;
    for (const auto& [i, j, k] : std::vector<std::array<int, 3>>{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}) {
        accumulate(expected, {3, {{i, j}, {3, k}}}, 1);
    }
    const SignedGraphSum got = expand_leibniz(bare_jacobiator());
    CHECK(got == expected);
    CHECK(got.size() == 3);

    Rng rng(8);
    for (int t = 0; t < 10; ++t) {
        const Bivector P = random_bivector(rng, 3, 2);
        const DiffPoly f = random_poly(rng, 3, 2, 3), g = random_poly(rng, 3, 2, 3), h = random_poly(rng, 3, 2, 3);
        CHECK(eval_graph_sum(got, P, {f, g, h}) == jacobiator_oracle(P, f, g, h));
    }
}

TEST_CASE("arrows into a Jacobiator follow the Leibniz rule") {
    // vertex 4 differentiates the Jacobiator once: {Jac(f,g,h)... } style
    // operator equals the bracket of a fourth argument with the Jacobiator.
    LeibnizGraph g{4, {{{0, 1, 2}}, {{3, 4}}}};
    const SignedGraphSum s = expand_leibniz(g);
    Rng rng(21);
    for (int t = 0; t < 5; ++t) {
        const Bivector P = random_bivector(rng, 3, 2);
        const DiffPoly f = random_poly(rng, 3, 2, 2), gg = random_poly(rng, 3, 2, 2), h = random_poly(rng, 3, 2, 2),
                       k = random_poly(rng, 3, 2, 2);
        // vertex 5 = P with arrows to sink 3 and to the Jacobiator vertex: f g h
        // sit under the Jacobiator, so the value is {k, Jac}-like with
        // derivatives of Jac only landing on its P factors, not on f,g,h.
        const DiffPoly value = eval_graph_sum(s, P, {f, gg, h, k});
        DiffPoly oracle;
        const DiffPoly jfull = jacobiator_oracle(P, f, gg, h);
        // Leibniz on Jac(f,g,h) minus derivatives falling on f, g, h.
        for (int a = 1; a <= 3; ++a) {
            for (int b = 1; b <= 3; ++b) {
                if (P(a, b).is_zero()) {
                    continue;
                }
                const Generator ub = Generator::even(b);
                const DiffPoly df = partial(f, ub), dg = partial(gg, ub), dh = partial(h, ub);
                const DiffPoly d_args = jacobiator_oracle(P, df, gg, h) + jacobiator_oracle(P, f, dg, h)
                                        + jacobiator_oracle(P, f, gg, dh);
                oracle += P(a, b) * partial(k, Generator::even(a)) * (partial(jfull, ub) - d_args);
            }
        }
        CHECK(value == oracle);
    }
}

TEST_CASE("Leibniz graph validation") {
    CHECK_THROWS_AS(validate(LeibnizGraph{3, {{{0, 1}}}}), DomainError);          // no Jacobiator
    CHECK_THROWS_AS(validate(LeibnizGraph{3, {{{0, 1, 3}}}}), DomainError);       // self target
    CHECK_THROWS_AS(validate(LeibnizGraph{3, {{{0, 1, 1}}}}), DomainError);       // repeated
    CHECK_THROWS_AS(validate(LeibnizGraph{3, {{{0, 1, 9}}}}), DomainError);       // missing
    CHECK_THROWS_AS(validate(LeibnizGraph{3, {{{0, 1, 2, 0}}}}), DomainError);    // arity
    CHECK_NOTHROW(validate(bare_jacobiator()));
}
