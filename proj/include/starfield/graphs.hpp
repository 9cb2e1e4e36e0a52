#pragma once

#include <array>
#include <compare>
#include <map>
#include <vector>

#include "starfield/scalar.hpp"

namespace starfield {

/// Sinks are vertices 0..s-1; internal vertex s+v emits edges[v] = (first, second).
struct KontsevichGraph {
    int sinks = 1;
    std::vector<std::array<int, 2>> edges;

    int internal() const { return static_cast<int>(edges.size()); }
    int vertex_count() const { return sinks + internal(); }

    friend auto operator<=>(const KontsevichGraph&, const KontsevichGraph&) = default;
    friend bool operator==(const KontsevichGraph&, const KontsevichGraph&) = default;
};

bool is_admissible(const KontsevichGraph& g);

struct NormalizedGraph {
    KontsevichGraph graph;
    /// +1 or -1; 0 when an automorphism reverses orientation and the graph
    /// is therefore zero at every skew bivector.
    int sign = 1;
};

/// Canonical representative: every ordered pair sorted ascending (one sign
/// flip per swap), internal vertices relabelled to the lexicographically
/// minimal encoding. Throws DomainError on inadmissible input.
NormalizedGraph normalize(const KontsevichGraph& g);

/// Internal vertex of a Leibniz graph: two targets for a wedge, three for a
/// Jacobiator.
struct LeibnizVertex {
    std::vector<int> targets;
    bool is_jacobiator() const { return targets.size() == 3; }

    friend bool operator==(const LeibnizVertex&, const LeibnizVertex&) = default;
};

struct LeibnizGraph {
    int sinks = 1;
    std::vector<LeibnizVertex> vertices; // vertex id = sinks + position

    int vertex_count() const { return sinks + static_cast<int>(vertices.size()); }
    friend bool operator==(const LeibnizGraph&, const LeibnizGraph&) = default;
};

/// Throws DomainError unless g has a Jacobiator vertex, every target is in
/// range and distinct within its vertex, and nothing targets itself.
void validate(const LeibnizGraph& g);

using SignedGraphSum = std::map<KontsevichGraph, Scalar>;

/// Adds coefficient * g after normalization; inadmissible (multiple-edge)
/// graphs and orientation-reversing graphs contribute nothing.
void accumulate(SignedGraphSum& sum, const KontsevichGraph& g, const Scalar& coefficient);

/// Replaces each Jacobiator vertex with targets (a,b,c) by the cyclic sum of
/// two-vertex configurations  d_l P^{ij} P^{lk} + d_l P^{jk} P^{li} + d_l P^{ki} P^{lj},
/// spreading arrows that landed on it over both new vertices.
SignedGraphSum expand_leibniz(const LeibnizGraph& g);

/// The graph with one Jacobiator over sinks 0,1,2.
LeibnizGraph bare_jacobiator();

} // namespace starfield
