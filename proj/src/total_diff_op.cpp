#include "starfield/total_diff_op.hpp"

#include <string>

#include "starfield/errors.hpp"
#include "starfield/jet.hpp"

namespace starfield {

namespace {

void add_to(TotalDiffOp::Entry& e, const MultiIndex& tau, const DiffPoly& c) {
    if (c.is_zero()) {
        return;
    }
    auto [it, inserted] = e.try_emplace(tau, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) {
            e.erase(it);
        }
    }
}

// D^alpha(c), cached by alpha.
class DerivativeCache {
public:
    explicit DerivativeCache(const DiffPoly& c) : c_(c) {}

    const DiffPoly& get(const MultiIndex& alpha) {
        auto it = cache_.find(alpha);
        if (it != cache_.end()) {
            return it->second;
        }
        DiffPoly v;
        if (alpha.empty()) {
            v = c_;
        } else {
            const int a = alpha.max_direction();
            const DiffPoly& base = get(alpha.lowered(a));
            v = total_derivative(base, a);
        }
        return cache_.emplace(alpha, std::move(v)).first->second;
    }

private:
    const DiffPoly& c_;
    std::map<MultiIndex, DiffPoly> cache_;
};

// (c D^tau) o (d D^rho) = c sum_{alpha <= tau} C(tau,alpha) D^alpha(d) D^{tau-alpha+rho}
void compose_terms(const DiffPoly& c, const MultiIndex& tau, const MultiIndex& rho,
                   DerivativeCache& dd, TotalDiffOp::Entry& out) {
    for (const MultiIndex& alpha : sub_indices(tau)) {
        const DiffPoly& da = dd.get(alpha);
        if (da.is_zero()) {
            continue;
        }
        add_to(out, tau - alpha + rho, mul(c, da) * multi_binomial(tau, alpha));
    }
}

} // namespace

TotalDiffOp::TotalDiffOp(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) {
        throw DimensionError("operator shape must be non-negative");
    }
    entries_.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
}

TotalDiffOp TotalDiffOp::identity(int n) {
    TotalDiffOp r(n, n);
    for (int i = 0; i < n; ++i) {
        r.add(i, i, {}, DiffPoly(1));
    }
    return r;
}

TotalDiffOp TotalDiffOp::monomial(const DiffPoly& c, const MultiIndex& tau) {
    TotalDiffOp r(1, 1);
    r.add(0, 0, tau, c);
    return r;
}

const TotalDiffOp::Entry& TotalDiffOp::entry(int i, int j) const {
    if (i < 0 || j < 0 || i >= rows_ || j >= cols_) {
        throw DimensionError("operator entry out of range");
    }
    return entries_[static_cast<std::size_t>(i * cols_ + j)];
}

void TotalDiffOp::add(int i, int j, const MultiIndex& tau, const DiffPoly& c) {
    if (i < 0 || j < 0 || i >= rows_ || j >= cols_) {
        throw DimensionError("operator entry out of range");
    }
    if (c.has_exp_atoms()) {
        throw DomainError("exp atoms are not allowed in operator coefficients");
    }
    add_to(entries_[static_cast<std::size_t>(i * cols_ + j)], tau, c);
}

bool TotalDiffOp::is_zero() const {
    for (const auto& e : entries_) {
        if (!e.empty()) {
            return false;
        }
    }
    return true;
}

TotalDiffOp& TotalDiffOp::operator+=(const TotalDiffOp& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionError("operator shapes differ");
    }
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        for (const auto& [tau, c] : other.entries_[k]) {
            add_to(entries_[k], tau, c);
        }
    }
    return *this;
}

TotalDiffOp& TotalDiffOp::operator-=(const TotalDiffOp& other) { return *this += -other; }

TotalDiffOp& TotalDiffOp::operator*=(const Scalar& s) {
    for (auto& e : entries_) {
        if (s == 0) {
            e.clear();
            continue;
        }
        for (auto& [tau, c] : e) {
            c *= s;
        }
    }
    return *this;
}

TotalDiffOp TotalDiffOp::operator-() const {
    TotalDiffOp r = *this;
    return r *= Scalar(-1);
}

std::vector<DiffPoly> op_apply(const TotalDiffOp& A, const std::vector<DiffPoly>& v) {
    if (static_cast<int>(v.size()) != A.cols()) {
        throw DimensionError("operator has " + std::to_string(A.cols()) + " columns but the vector has "
                             + std::to_string(v.size()) + " entries");
    }
    std::vector<DiffPoly> out(static_cast<std::size_t>(A.rows()));
    for (int j = 0; j < A.cols(); ++j) {
        DerivativeCache dv(v[static_cast<std::size_t>(j)]);
        for (int i = 0; i < A.rows(); ++i) {
            for (const auto& [tau, c] : A.entry(i, j)) {
                const DiffPoly& d = dv.get(tau);
                if (!d.is_zero()) {
                    out[static_cast<std::size_t>(i)] += mul(c, d);
                }
            }
        }
    }
    return out;
}

TotalDiffOp op_compose(const TotalDiffOp& A, const TotalDiffOp& B) {
    if (A.cols() != B.rows()) {
        throw DimensionError("cannot compose a " + std::to_string(A.rows()) + "x" + std::to_string(A.cols())
                             + " operator with a " + std::to_string(B.rows()) + "x"
                             + std::to_string(B.cols()) + " operator");
    }
    TotalDiffOp r(A.rows(), B.cols());
    for (int i = 0; i < A.rows(); ++i) {
        for (int k = 0; k < B.cols(); ++k) {
            TotalDiffOp::Entry acc;
            for (int j = 0; j < A.cols(); ++j) {
                for (const auto& [rho, d] : B.entry(j, k)) {
                    DerivativeCache dd(d);
                    for (const auto& [tau, c] : A.entry(i, j)) {
                        compose_terms(c, tau, rho, dd, acc);
                    }
                }
            }
            for (const auto& [tau, c] : acc) {
                r.add(i, k, tau, c);
            }
        }
    }
    return r;
}

TotalDiffOp op_adjoint(const TotalDiffOp& A) {
    TotalDiffOp r(A.cols(), A.rows());
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) {
            for (const auto& [tau, c] : A.entry(i, j)) {
                // (-1)^|tau| D^tau o c = (-1)^|tau| sum_alpha C(tau,alpha) D^alpha(c) D^{tau-alpha}
                DerivativeCache dc(c);
                const Scalar sign = tau.order() % 2 == 0 ? Scalar(1) : Scalar(-1);
                for (const MultiIndex& alpha : sub_indices(tau)) {
                    const DiffPoly& da = dc.get(alpha);
                    if (!da.is_zero()) {
                        r.add(j, i, tau - alpha, da * (sign * multi_binomial(tau, alpha)));
                    }
                }
            }
        }
    }
    return r;
}

TotalDiffOp linearize(const std::vector<DiffPoly>& w, int fields) {
    TotalDiffOp r(static_cast<int>(w.size()), fields);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!w[i].is_even() || w[i].odd_degree().value_or(1) != 0) {
            throw DomainError("linearization needs even expressions");
        }
        for (GenKey k : w[i].generator_keys()) {
            if (key::kind(k) != GenKind::even) {
                continue;
            }
            if (key::field(k) > fields) {
                throw DimensionError("expression mentions field " + std::to_string(key::field(k))
                                     + " beyond " + std::to_string(fields));
            }
            r.add(static_cast<int>(i), key::field(k) - 1, key::sigma(k), partial(w[i], k));
        }
        if (w[i].has_exp_atoms()) {
            throw DomainError("exp atoms are not allowed in operator coefficients");
        }
    }
    return r;
}

TotalDiffOp prolong_substitute(const TotalDiffOp& A, const std::vector<DiffPoly>& w) {
    TotalDiffOp r(A.rows(), A.cols());
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) {
            for (const auto& [tau, c] : A.entry(i, j)) {
                r.add(i, j, tau, prolong_substitute(c, w));
            }
        }
    }
    return r;
}

} // namespace starfield
