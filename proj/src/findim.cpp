#include "starfield/findim.hpp"

#include <algorithm>
#include <string>

#include "starfield/errors.hpp"

namespace starfield {

namespace {

GenKey u_key(int i) { return key::make(GenKind::even, i, {}); }

// Highest total degree of any monomial (odd part ignored; only called on
// functions of u).
int total_degree(const DiffPoly& p) {
    int best = 0;
    for (const auto& [m, c] : p.terms()) {
        int d = 0;
        for (const auto& [k, e] : m.even) {
            d += static_cast<int>(e);
        }
        best = std::max(best, d);
    }
    return best;
}

void require_dim(const Bivector& P, const Bivector& Q) {
    if (P.dim() != Q.dim()) {
        throw DimensionError("bivectors have dimensions " + std::to_string(P.dim()) + " and "
                             + std::to_string(Q.dim()));
    }
}

DiffPoly grad(const DiffPoly& f, int i) { return partial(f, u_key(i)); }

} // namespace

// ---- Bivector --------------------------------------------------------------

Bivector::Bivector(int dim) : dim_(dim) {
    if (dim < 1 || dim > key::kMaxField) {
        throw DimensionError("bivector dimension out of range: " + std::to_string(dim));
    }
}

void Bivector::set(int i, int j, const DiffPoly& value) {
    if (i < 1 || j < 1 || i > dim_ || j > dim_) {
        throw DimensionError("component index out of range");
    }
    if (i == j) {
        if (!value.is_zero()) {
            throw DomainError("diagonal components of a skew bivector must vanish");
        }
        return;
    }
    require_function_of_u(value, dim_);
    const auto idx = std::minmax(i, j);
    DiffPoly v = i < j ? value : -value;
    if (v.is_zero()) {
        components_.erase(idx);
    } else {
        components_[idx] = std::move(v);
    }
}

DiffPoly Bivector::operator()(int i, int j) const {
    if (i == j) {
        return {};
    }
    auto it = components_.find(std::minmax(i, j));
    if (it == components_.end()) {
        return {};
    }
    return i < j ? it->second : -it->second;
}

bool Bivector::is_constant() const {
    return std::all_of(components_.begin(), components_.end(),
                       [](const auto& c) { return c.second.is_constant(); });
}

DiffPoly Bivector::odd_form() const {
    DiffPoly r;
    for (const auto& [ij, p] : components_) {
        r += mul(p, mul(DiffPoly::generator(Generator::odd(ij.first)),
                        DiffPoly::generator(Generator::odd(ij.second))));
    }
    return r;
}

void require_function_of_u(const DiffPoly& p, int n) {
    if (p.has_exp_atoms()) {
        throw DomainError("exp atoms are not allowed in finite-dimensional functions");
    }
    for (GenKey k : p.generator_keys()) {
        if (key::kind(k) != GenKind::even || key::order(k) != 0) {
            throw DomainError("expected a polynomial in u1..u" + std::to_string(n));
        }
        if (key::field(k) > n) {
            throw DimensionError("field u" + std::to_string(key::field(k)) + " exceeds dimension "
                                 + std::to_string(n));
        }
    }
}

DiffPoly u(int i) { return DiffPoly::generator(Generator::even(i)); }

// ---- brackets --------------------------------------------------------------

DiffPoly poisson_bracket(const Bivector& P, const DiffPoly& f, const DiffPoly& g) {
    require_function_of_u(f, P.dim());
    require_function_of_u(g, P.dim());
    const int n = P.dim();
    std::vector<DiffPoly> dg(static_cast<std::size_t>(n) + 1);
    for (int j = 1; j <= n; ++j) {
        dg[static_cast<std::size_t>(j)] = grad(g, j);
    }
    DiffPoly r;
    for (int i = 1; i <= n; ++i) {
        DiffPoly fi = grad(f, i);
        if (fi.is_zero()) {
            continue;
        }
        DiffPoly inner;
        for (int j = 1; j <= n; ++j) {
            if (!dg[static_cast<std::size_t>(j)].is_zero()) {
                inner += mul(P(i, j), dg[static_cast<std::size_t>(j)]);
            }
        }
        r += mul(fi, inner);
    }
    return r;
}

DiffPoly jacobiator(const Bivector& P, const DiffPoly& f, const DiffPoly& g, const DiffPoly& h) {
    return poisson_bracket(P, poisson_bracket(P, f, g), h)
           + poisson_bracket(P, poisson_bracket(P, g, h), f)
           + poisson_bracket(P, poisson_bracket(P, h, f), g);
}

Trivector jacobiator_components(const Bivector& P) {
    const int n = P.dim();
    auto term = [&](int i, int j, int k) {
        DiffPoly r;
        for (int l = 1; l <= n; ++l) {
            DiffPoly plk = P(l, k);
            if (!plk.is_zero()) {
                r += mul(partial(P(i, j), u_key(l)), plk);
            }
        }
        return r;
    };
    Trivector out;
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            for (int k = j + 1; k <= n; ++k) {
                DiffPoly c = term(i, j, k) + term(j, k, i) + term(k, i, j);
                if (!c.is_zero()) {
                    out.emplace(std::array<int, 3>{i, j, k}, std::move(c));
                }
            }
        }
    }
    return out;
}

Trivector schouten(const Bivector& P, const Bivector& Q) {
    require_dim(P, Q);
    const DiffPoly p = P.odd_form();
    const DiffPoly q = Q.odd_form();
    DiffPoly s;
    for (int i = 1; i <= P.dim(); ++i) {
        const Generator ui = Generator::even(i);
        const Generator xi = Generator::odd(i);
        s += mul(partial(p, ui, Side::right), partial(q, xi, Side::left));
        s -= mul(partial(p, xi, Side::right), partial(q, ui, Side::left));
    }
    Trivector out;
    for (const auto& [m, c] : s.terms()) {
        if (m.odd.size() != 3) {
            throw Error("internal: Schouten bracket of bivectors is not a trivector");
        }
        Monomial bare = m;
        bare.odd.clear();
        std::array<int, 3> idx{key::field(m.odd[0]), key::field(m.odd[1]), key::field(m.odd[2])};
        auto& slot = out[idx];
        slot.add_term(bare, c);
        if (slot.is_zero()) {
            out.erase(idx);
        }
    }
    return out;
}

// ---- graph evaluation --------------------------------------------------------

namespace {

class GraphEvaluator {
public:
    GraphEvaluator(const KontsevichGraph& g, const Bivector& P, const std::vector<DiffPoly>& args)
        : g_(g), P_(P), args_(args), n_(P.dim()), s_(g.sinks), k_(g.internal()) {
        incoming_.resize(static_cast<std::size_t>(g.vertex_count()));
        for (int v = 0; v < k_; ++v) {
            for (int slot = 0; slot < 2; ++slot) {
                incoming_[static_cast<std::size_t>(g.edges[static_cast<std::size_t>(v)][slot])]
                    .push_back(2 * v + slot);
            }
        }
        // Level at which a vertex's factor is fully determined: the last
        // internal vertex (0-based) among its sources and itself; -1 if none.
        ready_.resize(static_cast<std::size_t>(k_) + 1);
        for (int w = 0; w < g.vertex_count(); ++w) {
            int level = w >= s_ ? w - s_ : -1;
            for (int e : incoming_[static_cast<std::size_t>(w)]) {
                level = std::max(level, e / 2);
            }
            ready_[static_cast<std::size_t>(level + 1)].push_back(w);
        }
        labels_.assign(static_cast<std::size_t>(2 * k_), 0);
    }

    DiffPoly run() {
        DiffPoly acc(1);
        if (!multiply_ready(0, acc)) {
            return {};
        }
        dfs(0, acc);
        return std::move(result_);
    }

private:
    const DiffPoly& derivative(int object, std::vector<int> idx) {
        auto key = std::make_pair(object, idx);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            return it->second;
        }
        DiffPoly value;
        if (idx.empty()) {
            if (object < s_) {
                value = args_[static_cast<std::size_t>(object)];
            } else {
                const int code = object - s_;
                value = P_(code / (n_ + 1), code % (n_ + 1));
            }
        } else {
            const int last = idx.back();
            idx.pop_back();
            const DiffPoly& base = derivative(object, idx);
            value = base.is_zero() ? DiffPoly{} : partial(base, u_key(last));
        }
        return cache_.emplace(std::move(key), std::move(value)).first->second;
    }

    DiffPoly factor(int w) {
        std::vector<int> idx;
        for (int e : incoming_[static_cast<std::size_t>(w)]) {
            idx.push_back(labels_[static_cast<std::size_t>(e)]);
        }
        std::sort(idx.begin(), idx.end());
        int object = w;
        if (w >= s_) {
            const int v = w - s_;
            object = s_ + labels_[static_cast<std::size_t>(2 * v)] * (n_ + 1)
                     + labels_[static_cast<std::size_t>(2 * v + 1)];
        }
        return derivative(object, std::move(idx));
    }

    bool multiply_ready(int level, DiffPoly& acc) {
        for (int w : ready_[static_cast<std::size_t>(level)]) {
            DiffPoly f = factor(w);
            if (f.is_zero()) {
                return false;
            }
            acc = mul(acc, f);
        }
        return true;
    }

    void dfs(int v, const DiffPoly& acc) {
        if (v == k_) {
            result_ += acc;
            return;
        }
        for (int i = 1; i <= n_; ++i) {
            for (int j = 1; j <= n_; ++j) {
                if (i == j || P_(i, j).is_zero()) {
                    continue;
                }
                labels_[static_cast<std::size_t>(2 * v)] = i;
                labels_[static_cast<std::size_t>(2 * v + 1)] = j;
                DiffPoly next = acc;
                if (multiply_ready(v + 1, next)) {
                    dfs(v + 1, next);
                }
            }
        }
    }

    const KontsevichGraph& g_;
    const Bivector& P_;
    const std::vector<DiffPoly>& args_;
    int n_;
    int s_;
    int k_;
    std::vector<std::vector<int>> incoming_;
    std::vector<std::vector<int>> ready_;
    std::vector<int> labels_;
    std::map<std::pair<int, std::vector<int>>, DiffPoly> cache_;
    DiffPoly result_;
};

} // namespace

DiffPoly eval_graph(const KontsevichGraph& g, const Bivector& P, const std::vector<DiffPoly>& args) {
    if (!is_admissible(g)) {
        throw DomainError("graph is not admissible");
    }
    if (static_cast<int>(args.size()) != g.sinks) {
        throw DimensionError("graph has " + std::to_string(g.sinks) + " sinks but "
                             + std::to_string(args.size()) + " arguments were given");
    }
    for (const auto& a : args) {
        require_function_of_u(a, P.dim());
    }
    return GraphEvaluator(g, P, args).run();
}

DiffPoly eval_graph_sum(const SignedGraphSum& sum, const Bivector& P, const std::vector<DiffPoly>& args) {
    DiffPoly r;
    for (const auto& [g, c] : sum) {
        r += eval_graph(g, P, args) * c;
    }
    return r;
}

// ---- order-2 star-product ------------------------------------------------------

const std::vector<std::pair<KontsevichGraph, Scalar>>& star2_graphs() {
    static const std::vector<std::pair<KontsevichGraph, Scalar>> graphs = {
        {KontsevichGraph{2, {{0, 1}}}, Scalar(1)},
        {KontsevichGraph{2, {{0, 1}, {0, 1}}}, Scalar(1, 2)},
        {KontsevichGraph{2, {{0, 3}, {0, 1}}}, Scalar(1, 3)},
        {KontsevichGraph{2, {{1, 3}, {0, 1}}}, Scalar(-1, 3)},
        {KontsevichGraph{2, {{0, 3}, {2, 1}}}, Scalar(1, 6)},
    };
    return graphs;
}

DiffPoly star2_term(const Bivector& P, int k, const DiffPoly& f, const DiffPoly& g) {
    if (k < 0 || k > 2) {
        throw DomainError("order-2 star-product has no hbar^" + std::to_string(k) + " term");
    }
    if (k == 0) {
        require_function_of_u(f, P.dim());
        require_function_of_u(g, P.dim());
        return mul(f, g);
    }
    DiffPoly r;
    for (const auto& [graph, weight] : star2_graphs()) {
        if (graph.internal() == k) {
            r += eval_graph(graph, P, {f, g}) * weight;
        }
    }
    return r;
}

HbarSeries star2(const Bivector& P, const DiffPoly& f, const DiffPoly& g) {
    return HbarSeries({star2_term(P, 0, f, g), star2_term(P, 1, f, g), star2_term(P, 2, f, g)});
}

// ---- Moyal -------------------------------------------------------------------

namespace {

DiffPoly moyal_term(const ConstantMatrix& M, int r, const DiffPoly& f, const DiffPoly& g,
                    std::map<std::vector<int>, DiffPoly>& df, std::map<std::vector<int>, DiffPoly>& dg) {
    const int n = static_cast<int>(M.size());
    const auto deg_f = static_cast<std::size_t>(total_degree(f));
    const auto deg_g = static_cast<std::size_t>(total_degree(g));
    if (static_cast<std::size_t>(r) > std::min(deg_f, deg_g)) {
        return {};
    }
    using State = std::map<std::pair<std::vector<int>, std::vector<int>>, Scalar>;
    State state{{{{}, {}}, Scalar(1)}};
    for (int step = 0; step < r; ++step) {
        State next;
        for (const auto& [ij, c] : state) {
            for (int i = 1; i <= n; ++i) {
                for (int j = 1; j <= n; ++j) {
                    const Scalar& m = M[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
                    if (m == 0) {
                        continue;
                    }
                    auto I = ij.first;
                    auto J = ij.second;
                    I.insert(std::upper_bound(I.begin(), I.end(), i), i);
                    J.insert(std::upper_bound(J.begin(), J.end(), j), j);
                    next[{std::move(I), std::move(J)}] += c * m;
                }
            }
        }
        state = std::move(next);
    }
    auto deriv = [](std::map<std::vector<int>, DiffPoly>& cache, const DiffPoly& p,
                    const std::vector<int>& idx) -> const DiffPoly& {
        auto it = cache.find(idx);
        if (it != cache.end()) {
            return it->second;
        }
        DiffPoly v = p;
        for (int i : idx) {
            if (v.is_zero()) {
                break;
            }
            v = partial(v, u_key(i));
        }
        return cache.emplace(idx, std::move(v)).first->second;
    };
    DiffPoly out;
    for (const auto& [ij, c] : state) {
        if (c == 0) {
            continue;
        }
        const DiffPoly& a = deriv(df, f, ij.first);
        if (a.is_zero()) {
            continue;
        }
        const DiffPoly& b = deriv(dg, g, ij.second);
        if (b.is_zero()) {
            continue;
        }
        out += mul(a, b) * c;
    }
    return out * (1 / factorial(r));
}

void check_matrix(const ConstantMatrix& M) {
    for (const auto& row : M) {
        if (row.size() != M.size()) {
            throw DimensionError("Moyal matrix must be square");
        }
    }
}

ConstantMatrix matrix_of(const Bivector& P) {
    if (!P.is_constant()) {
        throw DomainError("Moyal product needs a constant bivector");
    }
    const auto n = static_cast<std::size_t>(P.dim());
    ConstantMatrix M(n, std::vector<Scalar>(n));
    for (const auto& [ij, c] : P.components()) {
        M[static_cast<std::size_t>(ij.first - 1)][static_cast<std::size_t>(ij.second - 1)] = c.constant_term();
        M[static_cast<std::size_t>(ij.second - 1)][static_cast<std::size_t>(ij.first - 1)] = -c.constant_term();
    }
    return M;
}

} // namespace

HbarSeries moyal_matrix(const ConstantMatrix& M, const DiffPoly& f, const DiffPoly& g, int K) {
    check_matrix(M);
    const int n = static_cast<int>(M.size());
    require_function_of_u(f, n);
    require_function_of_u(g, n);
    HbarSeries r(K);
    std::map<std::vector<int>, DiffPoly> df;
    std::map<std::vector<int>, DiffPoly> dg;
    for (int k = 0; k <= K; ++k) {
        r.coefficient(k) = moyal_term(M, k, f, g, df, dg);
    }
    return r;
}

HbarSeries moyal(const Bivector& P, const DiffPoly& f, const DiffPoly& g, int K) {
    return moyal_matrix(matrix_of(P), f, g, K);
}

// ---- truncated star-products and associators -----------------------------------

void validate(const StarProductTruncation& S) {
    if (S.K < 0) {
        throw DomainError("truncation order must be non-negative");
    }
    if (S.mode == StarMode::general_order2 && S.K > 2) {
        throw DomainError("general star-product is only known through hbar^2");
    }
    if (S.mode == StarMode::constant_moyal && !S.P.is_constant()) {
        throw DomainError("Moyal mode needs a constant bivector");
    }
}

HbarSeries star(const StarProductTruncation& S, const HbarSeries& a, const HbarSeries& b) {
    validate(S);
    const int K = std::min({S.K, a.order(), b.order()});
    ConstantMatrix M;
    if (S.mode == StarMode::constant_moyal) {
        M = matrix_of(S.P);
    }
    HbarSeries out(K);
    for (int p = 0; p <= K; ++p) {
        for (int q = 0; p + q <= K; ++q) {
            if (a[p].is_zero() || b[q].is_zero()) {
                continue;
            }
            if (S.mode == StarMode::general_order2) {
                for (int r = 0; p + q + r <= K; ++r) {
                    out.coefficient(p + q + r) += star2_term(S.P, r, a[p], b[q]);
                }
            } else {
                HbarSeries m = moyal_matrix(M, a[p], b[q], K - p - q);
                for (int r = 0; p + q + r <= K; ++r) {
                    out.coefficient(p + q + r) += m[r];
                }
            }
        }
    }
    return out;
}

namespace {

HbarSeries lift(const DiffPoly& p, int K) {
    std::vector<DiffPoly> c(static_cast<std::size_t>(K) + 1);
    c[0] = p;
    return HbarSeries(std::move(c));
}

} // namespace

HbarSeries star(const StarProductTruncation& S, const DiffPoly& f, const DiffPoly& g) {
    return star(S, lift(f, S.K), lift(g, S.K));
}

HbarSeries associator(const StarProductTruncation& S, const DiffPoly& f, const DiffPoly& g,
                      const DiffPoly& h) {
    const HbarSeries F = lift(f, S.K);
    const HbarSeries G = lift(g, S.K);
    const HbarSeries H = lift(h, S.K);
    return star(S, star(S, F, G), H) - star(S, F, star(S, G, H));
}

Scalar factorization_constant() { return Scalar(2, 3); }

DiffPoly factorization_residual(const Bivector& P, const DiffPoly& f, const DiffPoly& g,
                                const DiffPoly& h) {
    const StarProductTruncation S{P, 2, StarMode::general_order2};
    return associator(S, f, g, h)[2] - jacobiator(P, f, g, h) * factorization_constant();
}

} // namespace starfield
