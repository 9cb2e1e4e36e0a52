// Seeded generators and small oracles shared by the tests.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "starfield/diff_poly.hpp"
#include "starfield/findim.hpp"
#include "starfield/generator.hpp"
#include "starfield/multi_index.hpp"

namespace starfield::testing {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Scalar small_rational(Rng& rng) {
    Scalar q(uniform(rng, -4, 4), uniform(rng, 1, 3));
    q.canonicalize();
    return q == 0 ? Scalar(1) : q;
}

inline DiffPoly field(int i) { return DiffPoly::generator(Generator::even(i)); }

/// Random polynomial in u^1..u^n (no jets), total degree <= degree.
inline DiffPoly random_poly(Rng& rng, int n, int degree, int terms, bool allow_constant = true) {
    DiffPoly p;
    for (int t = 0; t < terms; ++t) {
        const int d = uniform(rng, allow_constant ? 0 : 1, degree);
        DiffPoly m = small_rational(rng);
        for (int k = 0; k < d; ++k) {
            m = m * field(uniform(rng, 1, n));
        }
        p += m;
    }
    return p;
}

/// Random jet generator of order <= max_order.
inline MultiIndex random_index(Rng& rng, int base_dim, int max_order) {
    MultiIndex s;
    const int ord = uniform(rng, 0, max_order);
    for (int k = 0; k < ord; ++k) {
        s = s.raised(uniform(rng, 1, base_dim));
    }
    return s;
}

struct DensityShape {
    int fields = 1;
    int base_dim = 1;
    int max_order = 3;
    int degree = 3;
    int terms = 4;
    bool odd = false;       // include odd jets (each term gets 0..2 of them)
    bool exp_atoms = false; // include exp(lambda.u)
    bool coordinates = false;
};

inline DiffPoly random_density(Rng& rng, const DensityShape& s) {
    DiffPoly p;
    for (int t = 0; t < s.terms; ++t) {
        DiffPoly m = small_rational(rng);
        const int d = uniform(rng, 0, s.degree);
        for (int k = 0; k < d; ++k) {
            m = m * DiffPoly::generator(
                        Generator::even(uniform(rng, 1, s.fields), random_index(rng, s.base_dim, s.max_order)));
        }
        if (s.odd) {
            const int k = uniform(rng, 0, 2);
            for (int j = 0; j < k; ++j) {
                m = m * DiffPoly::generator(
                            Generator::odd(uniform(rng, 1, s.fields), random_index(rng, s.base_dim, s.max_order)));
            }
        }
        if (s.exp_atoms && uniform(rng, 0, 2) == 0) {
            std::vector<Scalar> lambda(static_cast<std::size_t>(s.fields));
            for (auto& l : lambda) {
                l = uniform(rng, -2, 2);
            }
            lambda.back() = uniform(rng, 1, 2);
            m = m * DiffPoly::generator(Generator::exp_atom(lambda));
        }
        if (s.coordinates && uniform(rng, 0, 3) == 0) {
            m = m * DiffPoly::generator(Generator::coordinate(uniform(rng, 1, s.base_dim)));
        }
        p += m;
    }
    return p;
}

/// Bivector with components of degree <= degree; sparse when density < 1.
inline Bivector random_bivector(Rng& rng, int n, int degree, int terms = 2) {
    Bivector P(n);
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            if (uniform(rng, 0, 2) > 0) {
                P.set(i, j, random_poly(rng, n, degree, terms));
            }
        }
    }
    return P;
}

/// Nambu-type structure {f,g} = a * det(grad f, grad g, grad C) on R^3,
/// Poisson for every a and C.
inline Bivector nambu_bivector(const DiffPoly& a, const DiffPoly& C) {
    Bivector P(3);
    const DiffPoly c1 = partial(C, Generator::even(1));
    const DiffPoly c2 = partial(C, Generator::even(2));
    const DiffPoly c3 = partial(C, Generator::even(3));
    P.set(1, 2, a * c3);
    P.set(2, 3, a * c1);
    P.set(1, 3, -(a * c2));
    return P;
}

inline Bivector random_nambu(Rng& rng, int a_degree = 1, int c_degree = 2) {
    return nambu_bivector(random_poly(rng, 3, a_degree, 2), random_poly(rng, 3, c_degree, 3, false));
}

/// Linear Poisson structures of the 3-dimensional Lie algebras so(3) and sl(2),
/// or a constant one on R^4, selected by k.
inline Bivector known_poisson(int k, const Scalar& scale = 1) {
    Bivector P(k < 2 ? 3 : 4);
    if (k == 0) {
        P.set(1, 2, scale * field(3));
        P.set(1, 3, Scalar(-scale) * field(2));
        P.set(2, 3, scale * field(1));
    } else if (k == 1) {
        P.set(1, 2, Scalar(2 * scale) * field(2));
        P.set(1, 3, Scalar(-2 * scale) * field(3));
        P.set(2, 3, scale * field(1));
    } else {
        P.set(1, 3, scale);
        P.set(2, 4, scale);
        P.set(1, 2, Scalar(scale * 2));
    }
    return P;
}

/// Jacobiator from the definition, through nested brackets only.
inline DiffPoly jacobiator_oracle(const Bivector& P, const DiffPoly& f, const DiffPoly& g, const DiffPoly& h) {
    auto br = [&](const DiffPoly& a, const DiffPoly& b) {
        DiffPoly r;
        for (int i = 1; i <= P.dim(); ++i) {
            for (int j = 1; j <= P.dim(); ++j) {
                if (!P(i, j).is_zero()) {
                    r += P(i, j) * partial(a, Generator::even(i)) * partial(b, Generator::even(j));
                }
            }
        }
        return r;
    };
    return br(br(f, g), h) + br(br(g, h), f) + br(br(h, f), g);
}

} // namespace starfield::testing
