#include "starfield/jet.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "starfield/errors.hpp"

namespace starfield {

namespace {

// Sorts an odd word by insertion, returning the sign of the permutation, or
// 0 if a generator repeats.
int canonicalize_odd(std::vector<GenKey>& word) {
    int sign = 1;
    for (std::size_t i = 1; i < word.size(); ++i) {
        for (std::size_t j = i; j > 0 && word[j - 1] >= word[j]; --j) {
            if (word[j - 1] == word[j]) {
                return 0;
            }
            std::swap(word[j - 1], word[j]);
            sign = -sign;
        }
    }
    return sign;
}

GenKey checked_raise(GenKey k, int direction) {
    if (key::order(k) >= 255 || key::count(k, direction) >= 255) {
        throw DomainError("jet order exceeds the supported maximum of 255");
    }
    return key::raised(k, direction);
}

bool is_jet(GenKey k) {
    const GenKind kind = key::kind(k);
    return kind == GenKind::even || kind == GenKind::odd;
}

} // namespace

void JetContext::check(const DiffPoly& p) const {
    for (GenKey k : p.generator_keys()) {
        const int f = key::field(k);
        if (key::kind(k) == GenKind::coordinate) {
            if (f > base_dim) {
                throw DimensionError("coordinate x" + std::to_string(f) + " outside base dimension "
                                     + std::to_string(base_dim));
            }
            continue;
        }
        if (key::kind(k) == GenKind::odd && !has_odd) {
            throw DimensionError("odd symbols are not allowed in this context");
        }
        if (f > fields) {
            throw DimensionError("field index " + std::to_string(f) + " exceeds " + std::to_string(fields));
        }
        if (key::sigma(k).max_direction() > base_dim) {
            throw DimensionError("derivative direction outside base dimension "
                                 + std::to_string(base_dim));
        }
    }
    for (const auto& [m, c] : p.terms()) {
        if (static_cast<int>(m.exp_lambda.size()) > fields) {
            throw DimensionError("exp atom mentions a field outside the context");
        }
    }
}

DiffPoly total_derivative(const DiffPoly& p, int direction) {
    if (direction < 1 || direction > kMaxBaseDim) {
        throw DimensionError("direction out of range: " + std::to_string(direction));
    }
    DiffPoly r;
    for (const auto& [m, c] : p.terms()) {
        // even part, including coordinates
        for (std::size_t i = 0; i < m.even.size(); ++i) {
            const auto [k, e] = m.even[i];
            Monomial rest = m;
            if (e == 1) {
                rest.even.erase(rest.even.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                rest.even[i].second = e - 1;
            }
            if (key::kind(k) == GenKind::coordinate) {
                if (key::field(k) == direction) {
                    r.add_term(rest, c * e);
                }
                continue;
            }
            Monomial d;
            d.even.emplace_back(checked_raise(k, direction), 1);
            auto [prod, sign] = multiply(rest, d);
            r.add_term(prod, c * e);
        }
        // exp atom: chain rule through the undifferentiated fields
        for (std::size_t i = 0; i < m.exp_lambda.size(); ++i) {
            if (m.exp_lambda[i] == 0) {
                continue;
            }
            Monomial d;
            d.even.emplace_back(key::make(GenKind::even, static_cast<int>(i) + 1, MultiIndex::single(direction)), 1);
            auto [prod, sign] = multiply(m, d);
            r.add_term(prod, c * m.exp_lambda[i]);
        }
        // odd word: D is even, so it passes through without sign
        for (std::size_t i = 0; i < m.odd.size(); ++i) {
            Monomial d = m;
            d.odd[i] = checked_raise(m.odd[i], direction);
            const int sign = canonicalize_odd(d.odd);
            if (sign != 0) {
                r.add_term(d, sign > 0 ? c : Scalar(-c));
            }
        }
    }
    return r;
}

DiffPoly total_derivative(const DiffPoly& p, const MultiIndex& sigma) {
    DiffPoly r = p;
    for (int a : sigma.directions()) {
        if (r.is_zero()) {
            break;
        }
        r = total_derivative(r, a);
    }
    return r;
}

std::set<Generator> fields_of(const DiffPoly& p) {
    std::set<Generator> out;
    for (GenKey k : p.generator_keys()) {
        if (key::kind(k) == GenKind::even) {
            out.insert(Generator::even(key::field(k)));
        } else if (key::kind(k) == GenKind::odd) {
            out.insert(Generator::odd(key::field(k)));
        }
    }
    for (const auto& [m, c] : p.terms()) {
        for (std::size_t i = 0; i < m.exp_lambda.size(); ++i) {
            if (m.exp_lambda[i] != 0) {
                out.insert(Generator::even(static_cast<int>(i) + 1));
            }
        }
    }
    return out;
}

DiffPoly euler(const DiffPoly& p, const Generator& field, Side side) {
    if ((field.kind() != GenKind::even && field.kind() != GenKind::odd) || !field.sigma().empty()) {
        throw DomainError("Euler operator needs an undifferentiated field");
    }
    std::set<GenKey> jets;
    if (field.kind() == GenKind::even) {
        jets.insert(field.packed());
    }
    for (GenKey k : p.generator_keys()) {
        if (key::kind(k) == field.kind() && key::field(k) == field.field()) {
            jets.insert(k);
        }
    }
    DiffPoly r;
    for (GenKey k : jets) {
        DiffPoly d = partial(p, k, side);
        if (d.is_zero()) {
            continue;
        }
        const MultiIndex sigma = key::sigma(k);
        d = total_derivative(d, sigma);
        if (sigma.order() % 2 == 1) {
            r -= d;
        } else {
            r += d;
        }
    }
    return r;
}

// ---- divergence witnesses ------------------------------------------------------

namespace {

Monomial drop_one(const Monomial& m, std::size_t i) {
    Monomial r = m;
    if (r.even[i].second == 1) {
        r.even.erase(r.even.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
        --r.even[i].second;
    }
    return r;
}

void insert_candidate(std::set<Monomial>& out, const Monomial& m, const Monomial& extra) {
    auto [prod, sign] = multiply(m, extra);
    if (sign != 0) {
        out.insert(prod);
    }
}

// Antiderivative guesses in direction a for a single monomial.
void candidates_for(const Monomial& m, int a, std::set<Monomial>& out) {
    Monomial xa;
    xa.even.emplace_back(key::make(GenKind::coordinate, a, {}), 1);
    insert_candidate(out, m, xa);
    for (std::size_t i = 0; i < m.even.size(); ++i) {
        const GenKey k = m.even[i].first;
        if (!is_jet(k) || key::count(k, a) == 0) {
            continue;
        }
        const Monomial rest = drop_one(m, i);
        Monomial lower;
        lower.even.emplace_back(key::make(key::kind(k), key::field(k), key::sigma(k).lowered(a)), 1);
        insert_candidate(out, rest, lower);
        if (key::order(k) == 1) {
            out.insert(rest);
        }
    }
    for (std::size_t i = 0; i < m.odd.size(); ++i) {
        const GenKey k = m.odd[i];
        if (key::count(k, a) == 0) {
            continue;
        }
        Monomial d = m;
        d.odd[i] = key::make(GenKind::odd, key::field(k), key::sigma(k).lowered(a));
        if (canonicalize_odd(d.odd) != 0) {
            out.insert(d);
        }
    }
}

struct Pivot {
    DiffPoly vec;
    std::map<std::size_t, Scalar> combo;
};

// Reduces v (with its combination) against the pivots, leading term = largest monomial.
void reduce(DiffPoly& v, std::map<std::size_t, Scalar>& combo, const std::map<Monomial, Pivot>& pivots) {
    while (!v.is_zero()) {
        const auto& [lead, coef] = *v.terms().rbegin();
        auto it = pivots.find(lead);
        if (it == pivots.end()) {
            return;
        }
        const Scalar c = coef;
        v -= it->second.vec * c;
        for (const auto& [j, x] : it->second.combo) {
            combo[j] -= x * c;
        }
    }
}

} // namespace

std::optional<std::vector<DiffPoly>> divergence_witness(const DiffPoly& p, const JetContext& ctx) {
    const int m = ctx.base_dim;
    std::vector<DiffPoly> zero(static_cast<std::size_t>(m));
    if (p.is_zero()) {
        return zero;
    }
    constexpr std::size_t kMaxCandidates = 4000;
    constexpr int kRounds = 3;

    std::vector<std::pair<int, Monomial>> cands;
    std::set<std::pair<int, Monomial>> seen;
    std::map<Monomial, Pivot> pivots;
    std::set<Monomial> frontier;
    for (const auto& [mono, c] : p.terms()) {
        frontier.insert(mono);
    }
    for (int round = 0; round < kRounds; ++round) {
        std::set<Monomial> next_frontier;
        for (int a = 1; a <= m; ++a) {
            std::set<Monomial> found;
            for (const auto& mono : frontier) {
                candidates_for(mono, a, found);
            }
            for (const auto& q : found) {
                if (!seen.emplace(a, q).second) {
                    continue;
                }
                if (cands.size() >= kMaxCandidates) {
                    break;
                }
                cands.emplace_back(a, q);
                DiffPoly v = total_derivative(DiffPoly::term(q, 1), a);
                for (const auto& [mono, c] : v.terms()) {
                    next_frontier.insert(mono);
                }
                std::map<std::size_t, Scalar> combo{{cands.size() - 1, Scalar(1)}};
                reduce(v, combo, pivots);
                if (!v.is_zero()) {
                    const Monomial lead = v.terms().rbegin()->first;
                    const Scalar inv = 1 / v.terms().rbegin()->second;
                    v *= inv;
                    for (auto& [j, x] : combo) {
                        x *= inv;
                    }
                    pivots.emplace(lead, Pivot{std::move(v), std::move(combo)});
                }
            }
        }
        // reduce() tracks rest = p + sum sol_j D(q_j), so the witness is -sol.
        DiffPoly rest = p;
        std::map<std::size_t, Scalar> sol;
        reduce(rest, sol, pivots);
        if (rest.is_zero()) {
            std::vector<DiffPoly> q(static_cast<std::size_t>(m));
            for (const auto& [j, x] : sol) {
                q[static_cast<std::size_t>(cands[j].first - 1)].add_term(cands[j].second, -x);
            }
            DiffPoly check;
            for (int a = 1; a <= m; ++a) {
                check += total_derivative(q[static_cast<std::size_t>(a - 1)], a);
            }
            if (check == p) {
                return q;
            }
            return std::nullopt;
        }
        frontier = std::move(next_frontier);
        if (cands.size() >= kMaxCandidates) {
            break;
        }
    }
    return std::nullopt;
}

DivergenceVerdict is_total_divergence(const DiffPoly& p, const JetContext& ctx) {
    ctx.check(p);
    for (const auto& f : fields_of(p)) {
        if (!euler(p, f).is_zero()) {
            return {false, true, std::nullopt};
        }
    }
    if (ctx.base_dim == 1) {
        return {true, true, std::nullopt};
    }
    auto w = divergence_witness(p, ctx);
    const bool found = w.has_value();
    return {true, found, std::move(w)};
}

DivergenceVerdict functional_equal(const LocalFunctional& F, const LocalFunctional& G,
                                   const JetContext& ctx) {
    return is_total_divergence(F.density - G.density, ctx);
}

// ---- equations and substitutions -------------------------------------------------

namespace {

struct Reducer {
    const MixedRule& rule;
    std::map<GenKey, DiffPoly> memo;

    bool mixed(GenKey k) const {
        return key::kind(k) == GenKind::even && key::field(k) == rule.field
               && key::count(k, rule.dir_a) > 0 && key::count(k, rule.dir_b) > 0;
    }

    DiffPoly run(const DiffPoly& p, int depth) {
        if (depth > 64) {
            throw DomainError("equation rewrite does not terminate");
        }
        std::map<Generator, DiffPoly> bindings;
        for (GenKey k : p.generator_keys()) {
            if (mixed(k)) {
                bindings.emplace(Generator::from_key(k), jet(k, depth));
            }
        }
        return bindings.empty() ? p : substitute(p, bindings);
    }

    DiffPoly jet(GenKey k, int depth) {
        auto it = memo.find(k);
        if (it != memo.end()) {
            return it->second;
        }
        const MultiIndex tau = key::sigma(k) - MultiIndex::of({rule.dir_a, rule.dir_b});
        DiffPoly value = run(total_derivative(rule.rhs, tau), depth + 1);
        memo.emplace(k, value);
        return value;
    }
};

} // namespace

DiffPoly reduce_on_equation(const DiffPoly& p, const MixedRule& rule) {
    if (rule.dir_a == rule.dir_b) {
        throw DomainError("equation rule needs two distinct directions");
    }
    Reducer r{rule, {}};
    for (GenKey k : rule.rhs.generator_keys()) {
        if (r.mixed(k)) {
            throw DomainError("right-hand side of the rule contains a mixed derivative");
        }
    }
    return r.run(p, 0);
}

DiffPoly prolong_substitute(const DiffPoly& p, const std::vector<DiffPoly>& w) {
    std::map<Generator, DiffPoly> bindings;
    const int n = static_cast<int>(w.size());
    for (int i = 1; i <= n; ++i) {
        bindings.emplace(Generator::even(i), w[static_cast<std::size_t>(i - 1)]);
    }
    for (GenKey k : p.generator_keys()) {
        if (key::kind(k) == GenKind::even && key::field(k) <= n && key::order(k) > 0) {
            bindings.emplace(Generator::from_key(k),
                             total_derivative(w[static_cast<std::size_t>(key::field(k) - 1)], key::sigma(k)));
        }
    }
    return substitute(p, bindings);
}

} // namespace starfield
