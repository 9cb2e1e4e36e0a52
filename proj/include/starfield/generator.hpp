#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "starfield/multi_index.hpp"
#include "starfield/scalar.hpp"

namespace starfield {

enum class GenKind : std::uint8_t { coordinate = 0, even = 1, odd = 2, exp_atom = 3 };

/// Packed identity of a coordinate, even-jet or odd-jet generator. Integer
/// order on keys is the canonical generator order: kind, field, derivative
/// order, then multi-index.
using GenKey = std::uint64_t;

namespace key {

inline constexpr int kMaxField = 4095;

GenKey make(GenKind kind, int field, const MultiIndex& sigma);

inline GenKind kind(GenKey k) { return static_cast<GenKind>(k >> 62); }
inline int field(GenKey k) { return static_cast<int>((k >> 50) & 0xfff); }
inline int order(GenKey k) { return static_cast<int>((k >> 42) & 0xff); }
inline bool is_odd(GenKey k) { return kind(k) == GenKind::odd; }
MultiIndex sigma(GenKey k);
int count(GenKey k, int direction);

/// Same field and kind, one more derivative in `direction`.
GenKey raised(GenKey k, int direction);

} // namespace key

/// A generator of the graded algebra: a base coordinate x^a, an even jet
/// u^i_sigma, an odd jet xi_{i,sigma}, or an atom exp(sum_i lambda_i u^i).
class Generator {
public:
    static Generator coordinate(int direction);
    static Generator even(int field, MultiIndex sigma = {});
    static Generator odd(int field, MultiIndex sigma = {});
    static Generator exp_atom(std::vector<Scalar> lambda);
    static Generator from_key(GenKey k);

    GenKind kind() const;
    bool is_odd() const { return kind() == GenKind::odd; }
    /// Field index for jets, direction for coordinates.
    int field() const { return key::field(key_); }
    MultiIndex sigma() const { return key::sigma(key_); }
    const std::vector<Scalar>& lambda() const { return lambda_; }

    /// Packed key; only meaningful when kind() != exp_atom.
    GenKey packed() const { return key_; }

    friend bool operator==(const Generator& a, const Generator& b);
    friend bool operator<(const Generator& a, const Generator& b);

private:
    Generator(GenKey k, std::vector<Scalar> lambda) : key_(k), lambda_(std::move(lambda)) {}

    GenKey key_ = 0;
    std::vector<Scalar> lambda_;
};

} // namespace starfield
