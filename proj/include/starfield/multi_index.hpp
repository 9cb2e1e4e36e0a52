#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "starfield/scalar.hpp"

namespace starfield {

inline constexpr int kMaxBaseDim = 4;

/// Multiset of base directions 1..kMaxBaseDim, stored as per-direction counts
/// since total derivatives commute.
class MultiIndex {
public:
    constexpr MultiIndex() = default;

    static MultiIndex of(std::initializer_list<int> directions);
    static MultiIndex single(int direction);

    int count(int direction) const;
    int order() const;
    bool empty() const { return order() == 0; }

    MultiIndex raised(int direction) const;
    MultiIndex lowered(int direction) const; // requires count(direction) > 0
    bool contains(const MultiIndex& other) const;

    MultiIndex operator+(const MultiIndex& other) const;
    MultiIndex operator-(const MultiIndex& other) const; // requires contains(other)

    /// Sorted direction list, e.g. {1,1,2} for xxy.
    std::vector<int> directions() const;
    int max_direction() const;

    /// Graded: lower order first, then higher counts in earlier directions.
    std::strong_ordering operator<=>(const MultiIndex& other) const;
    bool operator==(const MultiIndex& other) const = default;

private:
    std::array<std::uint8_t, kMaxBaseDim> counts_{};
};

/// Product of per-direction binomials C(top_a, sub_a).
Scalar multi_binomial(const MultiIndex& top, const MultiIndex& sub);

/// Every alpha with alpha <= top componentwise.
std::vector<MultiIndex> sub_indices(const MultiIndex& top);

} // namespace starfield
