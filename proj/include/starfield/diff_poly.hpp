#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "starfield/generator.hpp"
#include "starfield/scalar.hpp"

namespace starfield {

/// Coefficient-free monomial: even powers, an ordered odd word and at most
/// one exponential atom (atoms multiply by adding exponents).
struct Monomial {
    std::vector<std::pair<GenKey, std::uint32_t>> even; // sorted by key, powers > 0
    std::vector<GenKey> odd;                            // strictly increasing
    std::vector<Scalar> exp_lambda;                     // empty: no atom; no trailing zeros

    int odd_degree() const { return static_cast<int>(odd.size()); }
    bool has_exp() const { return !exp_lambda.empty(); }
    bool is_one() const { return even.empty() && odd.empty() && exp_lambda.empty(); }

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend bool operator<(const Monomial& a, const Monomial& b);
};

/// Product of two monomials; the int is the Koszul sign, 0 when an odd
/// generator repeats.
std::pair<Monomial, int> multiply(const Monomial& a, const Monomial& b);

/// Differential polynomial with exact coefficients, kept in canonical form:
/// no zero coefficients, odd words in canonical order with the sign absorbed.
class DiffPoly {
public:
    using TermMap = std::map<Monomial, Scalar>;

    DiffPoly() = default;
    DiffPoly(const Scalar& constant); // NOLINT: constants convert implicitly
    DiffPoly(int constant) : DiffPoly(Scalar(constant)) {}

    static DiffPoly generator(const Generator& g, std::uint32_t power = 1);
    static DiffPoly term(Monomial m, const Scalar& coefficient);

    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Scalar constant_term() const;
    Scalar coefficient(const Monomial& m) const;

    /// Odd degree when every term has the same one.
    std::optional<int> odd_degree() const;
    /// True when every odd degree present is even (the value is parity-even).
    bool is_even() const;
    bool has_exp_atoms() const;

    /// Every non-exp generator key appearing in some term.
    std::set<GenKey> generator_keys() const;

    void add_term(const Monomial& m, const Scalar& coefficient);

    DiffPoly& operator+=(const DiffPoly& other);
    DiffPoly& operator-=(const DiffPoly& other);
    DiffPoly& operator*=(const Scalar& factor);
    DiffPoly operator-() const;

    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
    friend DiffPoly operator*(DiffPoly a, const Scalar& s) { return a *= s; }
    friend DiffPoly operator*(const Scalar& s, DiffPoly a) { return a *= s; }
    friend DiffPoly operator*(DiffPoly a, int s) { return a *= Scalar(s); }
    friend DiffPoly operator*(int s, DiffPoly a) { return a *= Scalar(s); }
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);

    friend bool operator==(const DiffPoly&, const DiffPoly&) = default;
    /// Arbitrary but deterministic total order (for use as map keys).
    friend bool operator<(const DiffPoly& a, const DiffPoly& b);

private:
    TermMap terms_;
};

enum class Side { left, right };

DiffPoly mul(const DiffPoly& a, const DiffPoly& b);
DiffPoly power(const DiffPoly& base, unsigned exponent);

/// Partial derivative. For odd generators `side` picks the left or right
/// Grassmann derivative; for even generators it is ignored. Differentiating
/// by an undifferentiated field also differentiates exp atoms.
DiffPoly partial(const DiffPoly& p, const Generator& g, Side side = Side::left);
DiffPoly partial(const DiffPoly& p, GenKey g, Side side = Side::left);

/// Simultaneous substitution of generators by values of the same parity.
DiffPoly substitute(const DiffPoly& p, const std::map<Generator, DiffPoly>& bindings);

/// Monomial cap from STARFIELD_MAX_TERMS (default 10^6), read once.
std::size_t term_limit();

} // namespace starfield
