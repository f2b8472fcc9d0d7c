#pragma once

#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "mindef/dynamics.hpp"
#include "mindef/network.hpp"

namespace testing {

using mindef::Complex;
using mindef::Network;
using mindef::PolySystem;
using mindef::Rational;
using mindef::Reaction;

std::string data_path(const std::string& name);
std::string read_text(const std::string& path);
Network load_network(const std::string& name);
PolySystem load_ode(const std::string& name);

/// Builds a network from (source, target, rate) triples over explicit complexes.
Network make_network(std::vector<std::string> species, std::vector<Complex> complexes,
                     std::vector<std::tuple<std::size_t, std::size_t, long>> reactions);

/// X1 <-> X2 with k(1,2) = a, k(2,1) = b.
Network reversible_pair(long a = 1, long b = 2);

/// The six-complex graph on 2A, 2B, 2C, A+B, A+C, B+C with 18 reactions:
/// complexes sharing a species react both ways. `rate(i, j)` gives k(i, j)
/// for 1-based complex indices.
inline bool shares_species(const Complex& a, const Complex& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0 && b[i] > 0) return true;
  return false;
}

template <class F>
Network example_one(F rate) {
  std::vector<Complex> c = {{2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
  std::vector<Reaction> r;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      if (i != j && shares_species(c[i], c[j])) r.push_back({i, j, Rational(rate(i + 1, j + 1))});
  return Network({"T100", "T010", "T001"}, c, r);
}

/// Random network: `species` species, up to `complexes` distinct complexes
/// with coefficients 0..max_coef, and each ordered pair present with
/// probability `density`. Rates are small positive rationals.
Network random_network(std::mt19937& rng, std::size_t species, std::size_t complexes,
                       int max_coef, double density);

/// Random polynomial system whose negative terms always consume their own
/// species, so it has a canonical realization.
PolySystem random_kinetic_system(std::mt19937& rng, std::size_t species, std::size_t terms,
                                 int max_exp);

}  // namespace testing
