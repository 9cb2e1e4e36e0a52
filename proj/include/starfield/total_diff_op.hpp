#pragma once

#include <map>
#include <vector>

#include "starfield/diff_poly.hpp"
#include "starfield/multi_index.hpp"

namespace starfield {

/// Matrix of total differential operators, each entry sum_tau c_tau D^tau
/// with every D to the right of its coefficient. Entries are 0-based.
class TotalDiffOp {
public:
    using Entry = std::map<MultiIndex, DiffPoly>;

    TotalDiffOp(int rows, int cols);

    static TotalDiffOp identity(int n);
    /// 1x1 operator c D^tau.
    static TotalDiffOp monomial(const DiffPoly& c, const MultiIndex& tau);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Entry& entry(int i, int j) const;
    /// Adds c D^tau to entry (i,j). Exp atoms are rejected (DomainError).
    void add(int i, int j, const MultiIndex& tau, const DiffPoly& c);
    bool is_zero() const;

    TotalDiffOp& operator+=(const TotalDiffOp& other);
    TotalDiffOp& operator-=(const TotalDiffOp& other);
    TotalDiffOp& operator*=(const Scalar& s);
    TotalDiffOp operator-() const;
    friend TotalDiffOp operator+(TotalDiffOp a, const TotalDiffOp& b) { return a += b; }
    friend TotalDiffOp operator-(TotalDiffOp a, const TotalDiffOp& b) { return a -= b; }
    friend TotalDiffOp operator*(const Scalar& s, TotalDiffOp a) { return a *= s; }
    friend bool operator==(const TotalDiffOp&, const TotalDiffOp&) = default;

private:
    int rows_;
    int cols_;
    std::vector<Entry> entries_; // row-major
};

std::vector<DiffPoly> op_apply(const TotalDiffOp& A, const std::vector<DiffPoly>& v);
TotalDiffOp op_compose(const TotalDiffOp& A, const TotalDiffOp& B);
/// Formal adjoint (c D^tau)^dagger = (-D)^tau o c, transposed.
TotalDiffOp op_adjoint(const TotalDiffOp& A);
/// Frechet derivative: entry (i,j) = sum_sigma d w^i / d u^j_sigma D^sigma,
/// with `fields` columns.
TotalDiffOp linearize(const std::vector<DiffPoly>& w, int fields);
/// Applies prolong_substitute to every coefficient.
TotalDiffOp prolong_substitute(const TotalDiffOp& A, const std::vector<DiffPoly>& w);

} // namespace starfield
