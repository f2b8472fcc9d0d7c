#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mindef/matrix.hpp"
#include "mindef/rational.hpp"

namespace mindef {

/// Stoichiometric vector of a complex; entry i is the coefficient of species i.
using Complex = std::vector<int>;

struct Reaction {
  std::size_t source;
  std::size_t target;
  Rational rate;

  friend bool operator==(const Reaction&, const Reaction&) = default;
};

/// A mass-action reaction network (S, C, R).
///
/// Complexes are pairwise distinct and may be isolated (touched by no
/// reaction). Reactions have distinct endpoints, strictly positive rates and
/// no parallel duplicates; they are kept sorted by (source, target). The
/// object is immutable once constructed.
class Network {
 public:
  Network(std::vector<std::string> species, std::vector<Complex> complexes,
          std::vector<Reaction> reactions);

  const std::vector<std::string>& species() const { return species_; }
  const std::vector<Complex>& complexes() const { return complexes_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }

  std::size_t species_count() const { return species_.size(); }
  std::size_t complex_count() const { return complexes_.size(); }

  std::optional<std::size_t> find_complex(const Complex& complex) const;
  std::optional<std::size_t> find_species(const std::string& name) const;

  /// k(source, target), zero when the reaction is absent.
  Rational rate(std::size_t source, std::size_t target) const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  std::vector<std::string> species_;
  std::vector<Complex> complexes_;
  std::vector<Reaction> reactions_;
};

/// Canonicalizes raw network data instead of rejecting it: complexes are
/// sorted lexicographically and deduplicated, reactions are re-indexed,
/// parallel reactions are merged by adding rates, and reactions that became
/// self-loops are dropped.
Network normalize_network(std::vector<std::string> species, std::vector<Complex> complexes,
                          std::vector<Reaction> reactions);

/// Y (n x m): [Y]_ij is the coefficient of species i in complex j.
Matrix stoichiometric_matrix(const Network& net);

/// A_k (m x m): off-diagonal [A_k]_ij = k(j, i), diagonal = minus the outflow.
Matrix kinetics_matrix(const Network& net);

/// Human-readable complex such as "2 X1 + X2"; the null complex prints "0".
std::string format_complex(const Complex& complex, const std::vector<std::string>& species);

}  // namespace mindef
