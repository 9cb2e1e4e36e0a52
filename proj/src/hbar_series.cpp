#include "starfield/hbar_series.hpp"

#include <algorithm>

#include "starfield/errors.hpp"

namespace starfield {

HbarSeries::HbarSeries(int order) {
    if (order < 0) {
        throw DomainError("series order must be non-negative");
    }
    coeffs_.resize(static_cast<std::size_t>(order) + 1);
}

HbarSeries::HbarSeries(std::vector<DiffPoly> coefficients) : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) {
        throw DomainError("series needs at least the hbar^0 coefficient");
    }
}

bool HbarSeries::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const DiffPoly& c) { return c.is_zero(); });
}

HbarSeries HbarSeries::truncated(int order) const {
    HbarSeries r(std::min(order, this->order()));
    for (int k = 0; k <= r.order(); ++k) {
        r.coeffs_[static_cast<std::size_t>(k)] = coeffs_[static_cast<std::size_t>(k)];
    }
    return r;
}

HbarSeries& HbarSeries::operator*=(const Scalar& s) {
    for (auto& c : coeffs_) {
        c *= s;
    }
    return *this;
}

HbarSeries operator+(const HbarSeries& a, const HbarSeries& b) {
    HbarSeries r(std::min(a.order(), b.order()));
    for (int k = 0; k <= r.order(); ++k) {
        r.coefficient(k) = a[k] + b[k];
    }
    return r;
}

HbarSeries operator-(const HbarSeries& a, const HbarSeries& b) {
    HbarSeries r(std::min(a.order(), b.order()));
    for (int k = 0; k <= r.order(); ++k) {
        r.coefficient(k) = a[k] - b[k];
    }
    return r;
}

HbarSeries mul(const HbarSeries& a, const HbarSeries& b) {
    HbarSeries r(std::min(a.order(), b.order()));
    for (int i = 0; i <= r.order(); ++i) {
        for (int j = 0; i + j <= r.order(); ++j) {
            r.coefficient(i + j) += mul(a[i], b[j]);
        }
    }
    return r;
}

} // namespace starfield
