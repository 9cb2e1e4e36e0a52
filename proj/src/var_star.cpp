#include "starfield/var_star.hpp"

#include <algorithm>
#include <climits>
#include <set>

#include "starfield/errors.hpp"

namespace starfield {

// ---- MultilocalSum ---------------------------------------------------------------

void MultilocalSum::add_key(const Key& k, const Scalar& c) {
    if (c == 0) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }
}

void MultilocalSum::add_product(const std::vector<int>& partition, const std::vector<DiffPoly>& densities,
                                const Scalar& coefficient) {
    if (coefficient == 0) {
        return;
    }
    // Expand the product of component densities into monomial tuples.
    std::vector<std::pair<std::vector<Monomial>, Scalar>> acc{{{}, coefficient}};
    for (const auto& d : densities) {
        std::vector<std::pair<std::vector<Monomial>, Scalar>> next;
        for (const auto& [ms, c] : acc) {
            for (const auto& [m, dc] : d.terms()) {
                auto ext = ms;
                ext.push_back(m);
                next.emplace_back(std::move(ext), c * dc);
            }
        }
        acc = std::move(next);
    }
    for (const auto& [ms, c] : acc) {
        add_key({partition, ms}, c);
    }
}

DiffPoly MultilocalSum::connected_density() const {
    DiffPoly r;
    for (const auto& [k, c] : terms_) {
        if (k.second.size() == 1) {
            r.add_term(k.second.front(), c);
        }
    }
    return r;
}

MultilocalSum MultilocalSum::disconnected_part() const {
    MultilocalSum r;
    for (const auto& [k, c] : terms_) {
        if (k.second.size() > 1) {
            r.add_key(k, c);
        }
    }
    return r;
}

std::map<std::vector<int>, std::vector<std::pair<Scalar, std::vector<Monomial>>>>
MultilocalSum::by_partition() const {
    std::map<std::vector<int>, std::vector<std::pair<Scalar, std::vector<Monomial>>>> out;
    for (const auto& [k, c] : terms_) {
        out[k.first].emplace_back(c, k.second);
    }
    return out;
}

MultilocalSum& MultilocalSum::operator+=(const MultilocalSum& other) {
    for (const auto& [k, c] : other.terms_) {
        add_key(k, c);
    }
    return *this;
}

MultilocalSum& MultilocalSum::operator-=(const MultilocalSum& other) {
    for (const auto& [k, c] : other.terms_) {
        add_key(k, -c);
    }
    return *this;
}

MultilocalVerdict multilocal_zero(const MultilocalSum& s, const JetContext& ctx) {
    MultilocalVerdict v;
    v.literally_zero = s.is_zero();
    if (v.literally_zero) {
        v.equivalent_to_zero = true;
        return v;
    }
    if (!s.disconnected_part().is_zero()) {
        return v;
    }
    const DivergenceVerdict d = is_total_divergence(s.connected_density(), ctx);
    v.equivalent_to_zero = d.is_divergence;
    v.complete = d.complete;
    return v;
}

// ---- formal star expressions ----------------------------------------------------------

namespace {

struct Slot {
    std::vector<int> fields; // sorted multiset of fields hit by partial derivatives
    MultiIndex pending;      // delayed total derivative
    int comp = -1;           // integral the input sits in; -1: input absent

    friend auto operator<=>(const Slot&, const Slot&) = default;
    friend bool operator==(const Slot&, const Slot&) = default;
};

struct FormalTerm {
    std::vector<Slot> slots;
    std::vector<DiffPoly> weights; // per component, functions of x

    friend bool operator<(const FormalTerm& a, const FormalTerm& b) {
        if (a.slots != b.slots) {
            return a.slots < b.slots;
        }
        return a.weights < b.weights;
    }
};

using FormalSum = std::map<FormalTerm, Scalar>;

void add_formal(FormalSum& s, FormalTerm t, const Scalar& c) {
    if (c == 0) {
        return;
    }
    auto [it, inserted] = s.try_emplace(std::move(t), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            s.erase(it);
        }
    }
}

// Relabel components by first appearance among slots.
FormalTerm canonical(FormalTerm t) {
    std::map<int, int> relabel;
    std::vector<DiffPoly> weights;
    for (auto& s : t.slots) {
        if (s.comp < 0) {
            continue;
        }
        auto [it, inserted] = relabel.try_emplace(s.comp, static_cast<int>(relabel.size()));
        if (inserted) {
            weights.push_back(t.weights[static_cast<std::size_t>(s.comp)]);
        }
        s.comp = it->second;
    }
    t.weights = std::move(weights);
    return t;
}

struct Expr {
    std::set<int> inputs;
    std::vector<FormalSum> orders;
};

class VarStar {
public:
    VarStar(const HamiltonianOperator& A, std::vector<DiffPoly> densities, int K)
        : A_(A), densities_(std::move(densities)), K_(K) {
        if (!A.has_field_free_coefficients()) {
            throw DomainError("variational Moyal product needs coefficients free of the fields");
        }
        if (K < 0) {
            throw DomainError("truncation order must be non-negative");
        }
        const JetContext ctx{A.base_dim(), A.fields(), false};
        for (const auto& d : densities_) {
            ctx.check(d);
            degree_.push_back(jet_degree(d));
        }
    }

    Expr input(int a) const {
        Expr e;
        e.inputs = {a};
        e.orders.resize(static_cast<std::size_t>(K_) + 1);
        FormalTerm t;
        t.slots.resize(densities_.size());
        t.slots[static_cast<std::size_t>(a)].comp = 0;
        t.weights = {DiffPoly(1)};
        add_formal(e.orders[0], t, 1);
        return e;
    }

    Expr star(const Expr& X, const Expr& Y) const {
        Expr out;
        out.inputs = X.inputs;
        out.inputs.insert(Y.inputs.begin(), Y.inputs.end());
        out.orders.resize(static_cast<std::size_t>(K_) + 1);
        for (int p = 0; p <= K_; ++p) {
            for (int q = 0; p + q <= K_; ++q) {
                FormalSum current;
                for (const auto& [tx, cx] : X.orders[static_cast<std::size_t>(p)]) {
                    for (const auto& [ty, cy] : Y.orders[static_cast<std::size_t>(q)]) {
                        add_formal(current, juxtapose(tx, ty), cx * cy);
                    }
                }
                Scalar inv_fact(1);
                for (int k = 0; p + q + k <= K_ && !current.empty(); ++k) {
                    if (k > 0) {
                        inv_fact /= k;
                    }
                    for (const auto& [t, c] : current) {
                        add_formal(out.orders[static_cast<std::size_t>(p + q + k)], t, c * inv_fact);
                    }
                    if (p + q + k < K_) {
                        current = wedge(current, X.inputs, Y.inputs);
                    }
                }
            }
        }
        return out;
    }

    std::vector<MultilocalSum> evaluate(const Expr& e) {
        std::vector<MultilocalSum> out(e.orders.size());
        for (std::size_t k = 0; k < e.orders.size(); ++k) {
            for (const auto& [t, c] : e.orders[k]) {
                std::vector<DiffPoly> dens = t.weights;
                std::vector<int> partition;
                bool zero = false;
                for (std::size_t a = 0; a < t.slots.size() && !zero; ++a) {
                    const Slot& s = t.slots[a];
                    partition.push_back(s.comp);
                    if (s.comp < 0) {
                        continue;
                    }
                    const DiffPoly& v = transported(a, s.fields, s.pending);
                    auto& d = dens[static_cast<std::size_t>(s.comp)];
                    d = mul(d, v);
                    zero = d.is_zero();
                }
                if (!zero) {
                    out[k].add_product(partition, dens, c);
                }
            }
        }
        return out;
    }

private:
    static int jet_degree(const DiffPoly& p) {
        int best = 0;
        for (const auto& [m, c] : p.terms()) {
            if (m.has_exp()) {
                return INT_MAX;
            }
            int d = 0;
            for (const auto& [k, e] : m.even) {
                if (key::kind(k) == GenKind::even) {
                    d += static_cast<int>(e);
                }
            }
            best = std::max(best, d);
        }
        return best;
    }

    static FormalTerm juxtapose(const FormalTerm& x, const FormalTerm& y) {
        FormalTerm t = x;
        const int shift = static_cast<int>(x.weights.size());
        for (std::size_t a = 0; a < y.slots.size(); ++a) {
            if (y.slots[a].comp >= 0) {
                t.slots[a] = y.slots[a];
                t.slots[a].comp += shift;
            }
        }
        t.weights.insert(t.weights.end(), y.weights.begin(), y.weights.end());
        return canonical(std::move(t));
    }

    // One application of the coupling between inputs of X (left) and Y (right):
    //   1/2 P^{ij}_l  d_i(a) . D^l d_j(b)  -  1/2 P^{ji}_l  D^l d_i(a) . d_j(b)
    FormalSum wedge(const FormalSum& s, const std::set<int>& left, const std::set<int>& right) const {
        FormalSum out;
        const int n = A_.fields();
        const Scalar half(1, 2);
        for (const auto& [t, c] : s) {
            for (int a : left) {
                for (int b : right) {
                    const auto ua = static_cast<std::size_t>(a);
                    const auto ub = static_cast<std::size_t>(b);
                    for (int i = 1; i <= n; ++i) {
                        if (static_cast<int>(t.slots[ua].fields.size()) >= degree_[ua]) {
                            continue;
                        }
                        for (int j = 1; j <= n; ++j) {
                            if (static_cast<int>(t.slots[ub].fields.size()) >= degree_[ub]) {
                                continue;
                            }
                            for (const auto& [lam, w] : A_.op().entry(i - 1, j - 1)) {
                                add_formal(out, couple(t, a, b, i, j, lam, w, false), c * half);
                            }
                            for (const auto& [lam, w] : A_.op().entry(j - 1, i - 1)) {
                                add_formal(out, couple(t, a, b, i, j, lam, w, true), -c * half);
                            }
                        }
                    }
                }
            }
        }
        return out;
    }

    static FormalTerm couple(const FormalTerm& t, int a, int b, int i, int j, const MultiIndex& lam,
                             const DiffPoly& w, bool transport_left) {
        FormalTerm r = t;
        Slot& sa = r.slots[static_cast<std::size_t>(a)];
        Slot& sb = r.slots[static_cast<std::size_t>(b)];
        sa.fields.insert(std::upper_bound(sa.fields.begin(), sa.fields.end(), i), i);
        sb.fields.insert(std::upper_bound(sb.fields.begin(), sb.fields.end(), j), j);
        (transport_left ? sa : sb).pending = (transport_left ? sa : sb).pending + lam;
        const int ca = sa.comp;
        const int cb = sb.comp;
        auto& wa = r.weights[static_cast<std::size_t>(ca)];
        wa = mul(wa, w);
        if (cb != ca) {
            wa = mul(wa, r.weights[static_cast<std::size_t>(cb)]);
            for (auto& s : r.slots) {
                if (s.comp == cb) {
                    s.comp = ca;
                }
            }
        }
        return canonical(std::move(r));
    }

    // sum_{sigma_1..sigma_k} (-D)^{sigma_1+..+sigma_k} d^k f / du^{i_1}_{sigma_1} .. du^{i_k}_{sigma_k}
    const DiffPoly& variational(std::size_t a, const std::vector<int>& fields) {
        auto key = std::make_pair(a, fields);
        auto it = var_cache_.find(key);
        if (it != var_cache_.end()) {
            return it->second;
        }
        std::map<MultiIndex, DiffPoly> stage{{MultiIndex{}, densities_[a]}};
        for (int i : fields) {
            std::map<MultiIndex, DiffPoly> next;
            for (const auto& [S, h] : stage) {
                std::set<GenKey> jets{key::make(GenKind::even, i, {})};
                for (GenKey k : h.generator_keys()) {
                    if (key::kind(k) == GenKind::even && key::field(k) == i) {
                        jets.insert(k);
                    }
                }
                for (GenKey k : jets) {
                    DiffPoly d = partial(h, k);
                    if (!d.is_zero()) {
                        next[S + key::sigma(k)] += d;
                    }
                }
            }
            stage = std::move(next);
        }
        DiffPoly v;
        for (const auto& [S, h] : stage) {
            DiffPoly d = total_derivative(h, S);
            if (S.order() % 2 == 1) {
                v -= d;
            } else {
                v += d;
            }
        }
        return var_cache_.emplace(std::move(key), std::move(v)).first->second;
    }

    const DiffPoly& transported(std::size_t a, const std::vector<int>& fields, const MultiIndex& p) {
        auto key = std::make_tuple(a, fields, p);
        auto it = transport_cache_.find(key);
        if (it != transport_cache_.end()) {
            return it->second;
        }
        DiffPoly v = total_derivative(variational(a, fields), p);
        return transport_cache_.emplace(std::move(key), std::move(v)).first->second;
    }

    const HamiltonianOperator& A_;
    std::vector<DiffPoly> densities_;
    int K_;
    std::vector<int> degree_;
    std::map<std::pair<std::size_t, std::vector<int>>, DiffPoly> var_cache_;
    std::map<std::tuple<std::size_t, std::vector<int>, MultiIndex>, DiffPoly> transport_cache_;
};

} // namespace

std::vector<MultilocalSum> var_moyal(const HamiltonianOperator& A, const LocalFunctional& F,
                                     const LocalFunctional& G, int K) {
    VarStar vs(A, {F.density, G.density}, K);
    return vs.evaluate(vs.star(vs.input(0), vs.input(1)));
}

std::vector<MultilocalSum> var_associator(const HamiltonianOperator& A, const LocalFunctional& F,
                                          const LocalFunctional& G, const LocalFunctional& H, int K) {
    VarStar vs(A, {F.density, G.density, H.density}, K);
    const Expr f = vs.input(0);
    const Expr g = vs.input(1);
    const Expr h = vs.input(2);
    auto left = vs.evaluate(vs.star(vs.star(f, g), h));
    const auto right = vs.evaluate(vs.star(f, vs.star(g, h)));
    for (std::size_t k = 0; k < left.size(); ++k) {
        left[k] -= right[k];
    }
    return left;
}

} // namespace starfield
