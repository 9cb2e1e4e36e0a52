#include "starfield/diff_poly.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "starfield/errors.hpp"

namespace starfield {

namespace {

void trim_lambda(std::vector<Scalar>& lambda) {
    while (!lambda.empty() && lambda.back() == 0) {
        lambda.pop_back();
    }
}

std::vector<Scalar> add_lambda(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
    std::vector<Scalar> r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) {
            r[i] += a[i];
        }
        if (i < b.size()) {
            r[i] += b[i];
        }
    }
    trim_lambda(r);
    return r;
}

void check_size(std::size_t n) {
    if (n > term_limit()) {
        throw TermLimitError("expression exceeds " + std::to_string(term_limit())
                             + " monomials (STARFIELD_MAX_TERMS)");
    }
}

} // namespace

std::size_t term_limit() {
    static const std::size_t limit = [] {
        if (const char* env = std::getenv("STARFIELD_MAX_TERMS")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end != env && v > 0) {
                return static_cast<std::size_t>(v);
            }
        }
        return static_cast<std::size_t>(1000000);
    }();
    return limit;
}

// ---- Monomial --------------------------------------------------------------

bool operator<(const Monomial& a, const Monomial& b) {
    if (a.even != b.even) {
        return a.even < b.even;
    }
    if (a.odd != b.odd) {
        return a.odd < b.odd;
    }
    return a.exp_lambda < b.exp_lambda;
}

std::pair<Monomial, int> multiply(const Monomial& a, const Monomial& b) {
    Monomial r;
    int sign = 1;

    // Odd part: merge two increasing words; each time an element of b jumps
    // over the remaining elements of a the sign flips that many times.
    r.odd.reserve(a.odd.size() + b.odd.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.odd.size() && j < b.odd.size()) {
        if (a.odd[i] == b.odd[j]) {
            return {Monomial{}, 0};
        }
        if (a.odd[i] < b.odd[j]) {
            r.odd.push_back(a.odd[i++]);
        } else {
            if ((a.odd.size() - i) % 2 == 1) {
                sign = -sign;
            }
            r.odd.push_back(b.odd[j++]);
        }
    }
    r.odd.insert(r.odd.end(), a.odd.begin() + static_cast<std::ptrdiff_t>(i), a.odd.end());
    r.odd.insert(r.odd.end(), b.odd.begin() + static_cast<std::ptrdiff_t>(j), b.odd.end());

    r.even.reserve(a.even.size() + b.even.size());
    i = 0;
    j = 0;
    while (i < a.even.size() && j < b.even.size()) {
        if (a.even[i].first == b.even[j].first) {
            r.even.emplace_back(a.even[i].first, a.even[i].second + b.even[j].second);
            ++i;
            ++j;
        } else if (a.even[i].first < b.even[j].first) {
            r.even.push_back(a.even[i++]);
        } else {
            r.even.push_back(b.even[j++]);
        }
    }
    r.even.insert(r.even.end(), a.even.begin() + static_cast<std::ptrdiff_t>(i), a.even.end());
    r.even.insert(r.even.end(), b.even.begin() + static_cast<std::ptrdiff_t>(j), b.even.end());

    if (a.has_exp() || b.has_exp()) {
        r.exp_lambda = add_lambda(a.exp_lambda, b.exp_lambda);
    }
    return {std::move(r), sign};
}

// ---- DiffPoly --------------------------------------------------------------

DiffPoly::DiffPoly(const Scalar& constant) {
    if (constant != 0) {
        terms_.emplace(Monomial{}, constant);
    }
}

DiffPoly DiffPoly::generator(const Generator& g, std::uint32_t power) {
    Monomial m;
    if (power == 0) {
        return DiffPoly(1);
    }
    switch (g.kind()) {
    case GenKind::exp_atom: {
        std::vector<Scalar> lambda;
        for (const auto& l : g.lambda()) {
            lambda.push_back(l * power);
        }
        trim_lambda(lambda);
        m.exp_lambda = std::move(lambda);
        break;
    }
    case GenKind::odd:
        if (power > 1) {
            return DiffPoly{};
        }
        m.odd.push_back(g.packed());
        break;
    default:
        m.even.emplace_back(g.packed(), power);
        break;
    }
    return term(std::move(m), 1);
}

DiffPoly DiffPoly::term(Monomial m, const Scalar& coefficient) {
    DiffPoly r;
    r.add_term(m, coefficient);
    return r;
}

bool DiffPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Scalar DiffPoly::constant_term() const { return coefficient(Monomial{}); }

Scalar DiffPoly::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
}

std::optional<int> DiffPoly::odd_degree() const {
    std::optional<int> deg;
    for (const auto& [m, c] : terms_) {
        if (deg && *deg != m.odd_degree()) {
            return std::nullopt;
        }
        deg = m.odd_degree();
    }
    return deg ? deg : std::optional<int>(0);
}

bool DiffPoly::is_even() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.first.odd_degree() % 2 == 0; });
}

bool DiffPoly::has_exp_atoms() const {
    return std::any_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.first.has_exp(); });
}

std::set<GenKey> DiffPoly::generator_keys() const {
    std::set<GenKey> keys;
    for (const auto& [m, c] : terms_) {
        for (const auto& [k, e] : m.even) {
            keys.insert(k);
        }
        keys.insert(m.odd.begin(), m.odd.end());
    }
    return keys;
}

void DiffPoly::add_term(const Monomial& m, const Scalar& coefficient) {
    if (coefficient == 0) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(m, coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& other) {
    for (const auto& [m, c] : other.terms_) {
        add_term(m, c);
    }
    check_size(terms_.size());
    return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& other) {
    for (const auto& [m, c] : other.terms_) {
        add_term(m, -c);
    }
    check_size(terms_.size());
    return *this;
}

DiffPoly& DiffPoly::operator*=(const Scalar& factor) {
    if (factor == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) {
        c *= factor;
    }
    return *this;
}

DiffPoly DiffPoly::operator-() const {
    DiffPoly r = *this;
    return r *= Scalar(-1);
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) { return mul(a, b); }

bool operator<(const DiffPoly& a, const DiffPoly& b) {
    return std::lexicographical_compare(
        a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(),
        [](const auto& x, const auto& y) {
            if (x.first == y.first) {
                return x.second < y.second;
            }
            return x.first < y.first;
        });
}

DiffPoly mul(const DiffPoly& a, const DiffPoly& b) {
    DiffPoly r;
    if (a.is_zero() || b.is_zero()) {
        return r;
    }
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            auto [m, sign] = multiply(ma, mb);
            if (sign == 0) {
                continue;
            }
            Scalar c = ca * cb;
            if (sign < 0) {
                c = -c;
            }
            r.add_term(m, c);
        }
        check_size(r.size());
    }
    return r;
}

DiffPoly power(const DiffPoly& base, unsigned exponent) {
    DiffPoly r(1);
    for (unsigned i = 0; i < exponent; ++i) {
        r = mul(r, base);
    }
    return r;
}

DiffPoly partial(const DiffPoly& p, const Generator& g, Side side) {
    if (g.kind() == GenKind::exp_atom) {
        throw DomainError("cannot differentiate with respect to an exp atom");
    }
    return partial(p, g.packed(), side);
}

DiffPoly partial(const DiffPoly& p, GenKey g, Side side) {
    DiffPoly r;
    const GenKind kind = key::kind(g);
    if (kind == GenKind::odd) {
        for (const auto& [m, c] : p.terms()) {
            auto it = std::lower_bound(m.odd.begin(), m.odd.end(), g);
            if (it == m.odd.end() || *it != g) {
                continue;
            }
            const auto pos = static_cast<std::size_t>(it - m.odd.begin());
            const std::size_t jumps = side == Side::left ? pos : m.odd.size() - 1 - pos;
            Monomial d = m;
            d.odd.erase(d.odd.begin() + static_cast<std::ptrdiff_t>(pos));
            r.add_term(d, jumps % 2 == 0 ? c : Scalar(-c));
        }
        return r;
    }

    const bool atom_variable = kind == GenKind::even && key::order(g) == 0;
    const auto field = static_cast<std::size_t>(key::field(g));
    for (const auto& [m, c] : p.terms()) {
        auto it = std::lower_bound(m.even.begin(), m.even.end(), g,
                                   [](const auto& entry, GenKey k) { return entry.first < k; });
        if (it != m.even.end() && it->first == g) {
            Monomial d = m;
            auto& entry = d.even[static_cast<std::size_t>(it - m.even.begin())];
            const Scalar factor = c * entry.second;
            if (--entry.second == 0) {
                d.even.erase(d.even.begin() + (it - m.even.begin()));
            }
            r.add_term(d, factor);
        }
        if (atom_variable && m.exp_lambda.size() >= field && m.exp_lambda[field - 1] != 0) {
            r.add_term(m, c * m.exp_lambda[field - 1]);
        }
    }
    return r;
}

DiffPoly substitute(const DiffPoly& p, const std::map<Generator, DiffPoly>& bindings) {
    std::map<GenKey, const DiffPoly*> by_key;
    for (const auto& [g, value] : bindings) {
        if (g.kind() == GenKind::exp_atom) {
            throw DomainError("exp atoms cannot be substituted directly");
        }
        for (const auto& [m, c] : value.terms()) {
            if ((m.odd_degree() % 2 == 1) != g.is_odd()) {
                throw ParityError("substitution changes the parity of a generator");
            }
        }
        by_key.emplace(g.packed(), &value);
    }
    if (by_key.empty()) {
        return p;
    }

    DiffPoly r;
    for (const auto& [m, c] : p.terms()) {
        DiffPoly acc(c);
        for (const auto& [k, e] : m.even) {
            auto it = by_key.find(k);
            const DiffPoly factor = it != by_key.end() ? power(*it->second, e)
                                                       : DiffPoly::generator(Generator::from_key(k), e);
            acc = mul(acc, factor);
        }
        if (m.has_exp()) {
            // exp(sum lambda_i u^i): every bound u^i must map to a linear form
            // in undifferentiated fields so the result is again an atom.
            std::vector<Scalar> lambda;
            for (std::size_t i = 0; i < m.exp_lambda.size(); ++i) {
                const Scalar& li = m.exp_lambda[i];
                if (li == 0) {
                    continue;
                }
                auto it = by_key.find(key::make(GenKind::even, static_cast<int>(i) + 1, {}));
                if (it == by_key.end()) {
                    std::vector<Scalar> unit(i + 1);
                    unit[i] = li;
                    lambda = add_lambda(lambda, unit);
                    continue;
                }
                for (const auto& [bm, bc] : it->second->terms()) {
                    if (!bm.odd.empty() || bm.has_exp() || bm.even.size() != 1
                        || bm.even[0].second != 1 || key::kind(bm.even[0].first) != GenKind::even
                        || key::order(bm.even[0].first) != 0) {
                        throw DomainError("substitution into an exp atom must be linear in fields");
                    }
                    const auto f = static_cast<std::size_t>(key::field(bm.even[0].first));
                    std::vector<Scalar> unit(f);
                    unit[f - 1] = li * bc;
                    lambda = add_lambda(lambda, unit);
                }
            }
            if (!lambda.empty()) {
                acc = mul(acc, DiffPoly::generator(Generator::exp_atom(lambda)));
            }
        }
        for (GenKey k : m.odd) {
            auto it = by_key.find(k);
            acc = mul(acc, it != by_key.end() ? *it->second : DiffPoly::generator(Generator::from_key(k)));
        }
        r += acc;
        check_size(r.size());
    }
    return r;
}

} // namespace starfield
