#pragma once

#include <optional>
#include <set>
#include <vector>

#include "starfield/diff_poly.hpp"

namespace starfield {

/// Shape of the jet space: m base directions, n even fields u^i and, when
/// has_odd, their odd partners xi_i.
struct JetContext {
    int base_dim = 1;
    int fields = 1;
    bool has_odd = true;

    /// Throws DimensionError if p mentions a field or direction outside the
    /// context (or odd symbols when has_odd is false).
    void check(const DiffPoly& p) const;
};

/// Total derivative D_a.
DiffPoly total_derivative(const DiffPoly& p, int direction);
/// D^sigma = product of D_a over the multi-index.
DiffPoly total_derivative(const DiffPoly& p, const MultiIndex& sigma);

/// Fields present in p, as undifferentiated generators (even fields include
/// those only seen through exp atoms).
std::set<Generator> fields_of(const DiffPoly& p);

/// Variational derivative sum_sigma (-D)^sigma d p / d field_sigma. `field`
/// must be an undifferentiated even or odd generator; odd fields use the
/// left derivative unless `side` says otherwise.
DiffPoly euler(const DiffPoly& p, const Generator& field, Side side = Side::left);

struct DivergenceVerdict {
    bool is_divergence = false;
    /// False when the verdict rests only on the Euler test in more than one
    /// base direction, without an explicit witness.
    bool complete = true;
    /// q with sum_a D_a(q[a-1]) = p when one was constructed.
    std::optional<std::vector<DiffPoly>> witness;

    explicit operator bool() const { return is_divergence; }
};

/// Decides whether p is a total divergence. For m = 1 the Euler test is
/// exact; for m > 1 a positive answer additionally tries to build a witness
/// and reports complete = false if none is found within the search bound.
DivergenceVerdict is_total_divergence(const DiffPoly& p, const JetContext& ctx);

/// Bounded search for q with sum_a D_a(q_a) = p; verified exactly.
std::optional<std::vector<DiffPoly>> divergence_witness(const DiffPoly& p, const JetContext& ctx);

/// Integral functional, identified modulo total divergences.
struct LocalFunctional {
    DiffPoly density;
};

DivergenceVerdict functional_equal(const LocalFunctional& F, const LocalFunctional& G,
                                   const JetContext& ctx);

/// Hyperbolic rewrite  u^field_{ab} = rhs  with a != b.
struct MixedRule {
    int field = 1;
    int dir_a = 1;
    int dir_b = 2;
    DiffPoly rhs;
};

/// Rewrites every jet of `rule.field` whose multi-index contains both
/// directions, using the rule and its prolongations, to a fixed point.
DiffPoly reduce_on_equation(const DiffPoly& p, const MixedRule& rule);

/// Replaces every even jet w^i_sigma (i = 1..w.size()) by D^sigma(w[i-1]),
/// simultaneously.
DiffPoly prolong_substitute(const DiffPoly& p, const std::vector<DiffPoly>& w);

} // namespace starfield
