#pragma once

#include <map>
#include <utility>
#include <vector>

#include "starfield/varpoisson.hpp"

namespace starfield {

/// Linear combination of products of integrals. Each key records, for every
/// input functional, the integral (component) it ended up in, and one
/// monomial per component; the value is the coefficient.
class MultilocalSum {
public:
    using Key = std::pair<std::vector<int>, std::vector<Monomial>>;

    /// Adds coefficient * prod_c integral(densities[c]).
    void add_product(const std::vector<int>& partition, const std::vector<DiffPoly>& densities,
                     const Scalar& coefficient);

    const std::map<Key, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Density of the part in which all inputs share one integral.
    DiffPoly connected_density() const;
    /// Everything that is a product of two or more integrals.
    MultilocalSum disconnected_part() const;
    /// Groups terms by partition and returns, for each, the list of
    /// (coefficient, component monomials) for printing.
    std::map<std::vector<int>, std::vector<std::pair<Scalar, std::vector<Monomial>>>> by_partition() const;

    MultilocalSum& operator+=(const MultilocalSum& other);
    MultilocalSum& operator-=(const MultilocalSum& other);
    friend MultilocalSum operator-(MultilocalSum a, const MultilocalSum& b) { return a -= b; }
    friend bool operator==(const MultilocalSum&, const MultilocalSum&) = default;

private:
    void add_key(const Key& k, const Scalar& c);
    std::map<Key, Scalar> terms_;
};

/// Order-by-order variational Moyal product for an operator whose
/// coefficients depend on x only. Total derivatives coming from the
/// couplings are applied after every partial derivative has acted.
/// Result[k] is the hbar^k coefficient; k = 0 is the product F x G.
std::vector<MultilocalSum> var_moyal(const HamiltonianOperator& A, const LocalFunctional& F,
                                     const LocalFunctional& G, int K);

/// (F*G)*H - F*(G*H), order by order.
std::vector<MultilocalSum> var_associator(const HamiltonianOperator& A, const LocalFunctional& F,
                                          const LocalFunctional& G, const LocalFunctional& H, int K);

struct MultilocalVerdict {
    bool equivalent_to_zero = false;
    bool literally_zero = false;
    bool complete = true;
};

/// Zero as a functional: the connected density must be a total divergence
/// and every product of two or more integrals must cancel literally.
MultilocalVerdict multilocal_zero(const MultilocalSum& s, const JetContext& ctx);

} // namespace starfield
