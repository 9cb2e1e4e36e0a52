#include "starfield/graphs.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "starfield/errors.hpp"

namespace starfield {

bool is_admissible(const KontsevichGraph& g) {
    if (g.sinks < 1) {
        return false;
    }
    const int n = g.vertex_count();
    for (int v = 0; v < g.internal(); ++v) {
        const auto [a, b] = g.edges[static_cast<std::size_t>(v)];
        const int self = g.sinks + v;
        if (a < 0 || b < 0 || a >= n || b >= n || a == self || b == self || a == b) {
            return false;
        }
    }
    return true;
}

NormalizedGraph normalize(const KontsevichGraph& g) {
    if (!is_admissible(g)) {
        throw DomainError("graph is not admissible (tadpole, multiple edge or bad target)");
    }
    const int s = g.sinks;
    const int k = g.internal();
    if (k == 0) {
        return {g, 1};
    }

    // perm[old internal position] = new internal position
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);

    std::vector<std::array<int, 2>> best;
    int best_sign = 0;
    bool conflict = false;
    std::vector<std::array<int, 2>> enc(static_cast<std::size_t>(k));
    do {
        auto relabel = [&](int v) { return v < s ? v : s + perm[static_cast<std::size_t>(v - s)]; };
        int sign = 1;
        for (int v = 0; v < k; ++v) {
            auto [a, b] = g.edges[static_cast<std::size_t>(v)];
            a = relabel(a);
            b = relabel(b);
            if (a > b) {
                std::swap(a, b);
                sign = -sign;
            }
            enc[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] = {a, b};
        }
        if (best.empty() || enc < best) {
            best = enc;
            best_sign = sign;
            conflict = false;
        } else if (enc == best && sign != best_sign) {
            conflict = true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    return {KontsevichGraph{s, best}, conflict ? 0 : best_sign};
}

void validate(const LeibnizGraph& g) {
    if (g.sinks < 1) {
        throw DomainError("Leibniz graph needs at least one sink");
    }
    const int n = g.vertex_count();
    bool has_jacobiator = false;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        const auto& t = g.vertices[v].targets;
        const int self = g.sinks + static_cast<int>(v);
        if (t.size() != 2 && t.size() != 3) {
            throw DomainError("vertex " + std::to_string(self) + " must have 2 or 3 targets");
        }
        has_jacobiator = has_jacobiator || t.size() == 3;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] < 0 || t[i] >= n) {
                throw DomainError("vertex " + std::to_string(self) + " targets a missing vertex");
            }
            if (t[i] == self) {
                throw DomainError("vertex " + std::to_string(self) + " targets itself");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (t[i] == t[j]) {
                    throw DomainError("vertex " + std::to_string(self) + " has a repeated target");
                }
            }
        }
    }
    if (!has_jacobiator) {
        throw DomainError("Leibniz graph has no Jacobiator vertex");
    }
}

void accumulate(SignedGraphSum& sum, const KontsevichGraph& g, const Scalar& coefficient) {
    if (coefficient == 0 || !is_admissible(g)) {
        return;
    }
    auto [canon, sign] = normalize(g);
    if (sign == 0) {
        return;
    }
    auto [it, inserted] = sum.try_emplace(canon, sign * coefficient);
    if (!inserted) {
        it->second += sign * coefficient;
        if (it->second == 0) {
            sum.erase(it);
        }
    }
}

namespace {

void expand_rec(LeibnizGraph g, SignedGraphSum& out) {
    auto jac = std::find_if(g.vertices.begin(), g.vertices.end(),
                            [](const LeibnizVertex& v) { return v.is_jacobiator(); });
    if (jac == g.vertices.end()) {
        KontsevichGraph k{g.sinks, {}};
        for (const auto& v : g.vertices) {
            k.edges.push_back({v.targets[0], v.targets[1]});
        }
        accumulate(out, k, 1);
        return;
    }
    const auto jpos = static_cast<std::size_t>(jac - g.vertices.begin());
    const int a = g.sinks + static_cast<int>(jpos);
    const int b = g.vertex_count();
    const std::vector<int> t = jac->targets;

    // Arrow slots (vertex position, slot) currently landing on the Jacobiator.
    std::vector<std::pair<std::size_t, std::size_t>> incoming;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        for (std::size_t slot = 0; slot < g.vertices[v].targets.size(); ++slot) {
            if (g.vertices[v].targets[slot] == a) {
                incoming.emplace_back(v, slot);
            }
        }
    }

    for (int rot = 0; rot < 3; ++rot) {
        const int p = t[static_cast<std::size_t>(rot)];
        const int q = t[static_cast<std::size_t>((rot + 1) % 3)];
        const int r = t[static_cast<std::size_t>((rot + 2) % 3)];
        const std::size_t choices = std::size_t{1} << incoming.size();
        for (std::size_t mask = 0; mask < choices; ++mask) {
            LeibnizGraph h = g;
            h.vertices[jpos].targets = {p, q};
            h.vertices.push_back(LeibnizVertex{{a, r}});
            for (std::size_t i = 0; i < incoming.size(); ++i) {
                if (mask >> i & 1U) {
                    h.vertices[incoming[i].first].targets[incoming[i].second] = b;
                }
            }
            expand_rec(std::move(h), out);
        }
    }
}

} // namespace

SignedGraphSum expand_leibniz(const LeibnizGraph& g) {
    validate(g);
    SignedGraphSum out;
    expand_rec(g, out);
    return out;
}

LeibnizGraph bare_jacobiator() { return LeibnizGraph{3, {LeibnizVertex{{0, 1, 2}}}}; }

} // namespace starfield
