#pragma once

#include <vector>

#include "starfield/diff_poly.hpp"

namespace starfield {

/// Truncated power series sum_{k<=K} hbar^k c_k. Binary arithmetic truncates
/// to the smaller order.
class HbarSeries {
public:
    explicit HbarSeries(int order);
    explicit HbarSeries(std::vector<DiffPoly> coefficients);

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const DiffPoly& operator[](int k) const { return coeffs_.at(k); }
    DiffPoly& coefficient(int k) { return coeffs_.at(k); }
    const std::vector<DiffPoly>& coefficients() const { return coeffs_; }

    bool is_zero() const;
    HbarSeries truncated(int order) const;

    HbarSeries& operator*=(const Scalar& s);
    friend HbarSeries operator+(const HbarSeries& a, const HbarSeries& b);
    friend HbarSeries operator-(const HbarSeries& a, const HbarSeries& b);
    friend HbarSeries operator*(const Scalar& s, HbarSeries a) { return a *= s; }
    friend bool operator==(const HbarSeries&, const HbarSeries&) = default;

private:
    std::vector<DiffPoly> coeffs_;
};

/// Cauchy product with the commutative multiplication of coefficients.
HbarSeries mul(const HbarSeries& a, const HbarSeries& b);

} // namespace starfield
