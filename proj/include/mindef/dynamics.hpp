#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mindef/matrix.hpp"
#include "mindef/network.hpp"

namespace mindef {

/// One monomial term coefficient * prod_i x_i^exponents[i].
struct Term {
  Complex exponents;
  Rational coefficient;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Polynomial right-hand side dx_i/dt = sum of equations[i]. Term order is
/// preserved; it determines complex numbering in the canonical realization.
struct PolySystem {
  std::vector<std::string> species;
  std::vector<std::vector<Term>> equations;

  /// Throws InvalidNetwork if exponent vectors have the wrong length or a
  /// negative entry, repeat within one equation, or a coefficient is zero.
  void validate() const;

  std::vector<Rational> evaluate(std::span<const Rational> x) const;

  friend bool operator==(const PolySystem&, const PolySystem&) = default;
};

/// Monomial exponent vector -> coefficient column (one entry per species).
/// Monomials whose column is entirely zero are omitted.
using CoefficientMap = std::map<Complex, std::vector<Rational>>;

CoefficientMap coefficient_map(const PolySystem& system);
CoefficientMap coefficient_map(const Network& net);

/// The polynomial system generated by a network; terms follow complex order.
PolySystem polynomial_system(const Network& net);

/// M = Y * A_k (n x m).
Matrix coefficient_matrix(const Network& net);

/// Mass-action vector: Psi_j(x) = prod_i x_i^[Y]_ij. Requires x >= 0.
std::vector<Rational> psi(const Network& net, std::span<const Rational> x);
Rational monomial_value(const Complex& exponents, std::span<const Rational> x);

/// Y * A_k * Psi(x).
std::vector<Rational> rhs(const Network& net, std::span<const Rational> x);

/// Builds the canonical network of a kinetic polynomial system: each term
/// a -> a + sign(coefficient) e_i with rate |coefficient|. Complexes are
/// numbered by first appearance (source before target, equations and terms in
/// order). Throws NonKinetic if a negative term in equation i has a_i = 0.
Network canonical_realization(const PolySystem& system);

/// Positive diagonal conjugacy candidate: target is claimed to satisfy
/// rhs_target(y) = diag(c)^-1 rhs_source(diag(c) y).
struct ConjugacyWitness {
  Network source;
  Network target;
  std::vector<Rational> c;  // indexed by source species order
};

struct ConjugacyResidual {
  Complex monomial;  // in source species order
  std::size_t species = 0;
  Rational value;    // target coefficient minus the expected one
};

struct ConjugacyCheck {
  bool conjugate = false;
  std::vector<ConjugacyResidual> residuals;  // only the nonzero ones
};

/// Exact check of Y' A_k' = diag(c)^-1 M diag(Psi(c)) with monomials aligned
/// by exponent vector. Species must be the same set (order may differ);
/// otherwise SpeciesMismatch.
ConjugacyCheck verify_linear_conjugacy(const Network& source, const Network& target,
                                       std::span<const Rational> c);
ConjugacyCheck verify_linear_conjugacy(const ConjugacyWitness& witness);

/// A_k * Psi(x*); zero exactly when x* is complex balanced.
std::vector<Rational> complex_balance_residual(const Network& net,
                                               std::span<const Rational> xstar);

}  // namespace mindef
