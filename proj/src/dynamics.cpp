#include "mindef/dynamics.hpp"

#include <set>

#include "mindef/error.hpp"

namespace mindef {

void PolySystem::validate() const {
  const std::size_t n = species.size();
  if (equations.size() != n)
    throw Error(ErrorKind::InvalidNetwork, "polynomial system needs one equation per species");
  for (std::size_t i = 0; i < n; ++i) {
    std::set<Complex> seen;
    for (const auto& term : equations[i]) {
      if (term.exponents.size() != n)
        throw Error(ErrorKind::InvalidNetwork,
                    "term in d" + species[i] + "/dt has the wrong number of exponents");
      for (int e : term.exponents)
        if (e < 0)
          throw Error(ErrorKind::InvalidNetwork, "negative exponent in d" + species[i] + "/dt");
      if (sgn(term.coefficient) == 0)
        throw Error(ErrorKind::InvalidNetwork, "zero coefficient in d" + species[i] + "/dt");
      if (!seen.insert(term.exponents).second)
        throw Error(ErrorKind::InvalidNetwork,
                    "monomial repeated in d" + species[i] + "/dt");
    }
  }
}

Rational monomial_value(const Complex& exponents, std::span<const Rational> x) {
  Rational value = 1;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    if (exponents[i] != 0) value *= pow(x[i], static_cast<unsigned>(exponents[i]));
  return value;
}

std::vector<Rational> PolySystem::evaluate(std::span<const Rational> x) const {
  if (x.size() != species.size())
    throw Error(ErrorKind::Internal, "state vector has the wrong length");
  std::vector<Rational> out(species.size());
  for (std::size_t i = 0; i < equations.size(); ++i)
    for (const auto& term : equations[i]) out[i] += term.coefficient * monomial_value(term.exponents, x);
  return out;
}

namespace {

void drop_zero_columns(CoefficientMap& map) {
  for (auto it = map.begin(); it != map.end();) {
    bool zero = true;
    for (const auto& v : it->second) zero = zero && sgn(v) == 0;
    it = zero ? map.erase(it) : std::next(it);
  }
}

}  // namespace

CoefficientMap coefficient_map(const PolySystem& system) {
  CoefficientMap map;
  const std::size_t n = system.species.size();
  for (std::size_t i = 0; i < system.equations.size(); ++i)
    for (const auto& term : system.equations[i]) {
      auto [it, inserted] = map.try_emplace(term.exponents, std::vector<Rational>(n));
      it->second[i] += term.coefficient;
    }
  drop_zero_columns(map);
  return map;
}

Matrix coefficient_matrix(const Network& net) {
  return stoichiometric_matrix(net) * kinetics_matrix(net);
}

CoefficientMap coefficient_map(const Network& net) {
  Matrix m = coefficient_matrix(net);
  CoefficientMap map;
  for (std::size_t j = 0; j < net.complex_count(); ++j) map.emplace(net.complexes()[j], m.column(j));
  drop_zero_columns(map);
  return map;
}

PolySystem polynomial_system(const Network& net) {
  Matrix m = coefficient_matrix(net);
  PolySystem system;
  system.species = net.species();
  system.equations.resize(net.species_count());
  for (std::size_t j = 0; j < net.complex_count(); ++j)
    for (std::size_t i = 0; i < net.species_count(); ++i)
      if (sgn(m(i, j)) != 0) system.equations[i].push_back({net.complexes()[j], m(i, j)});
  return system;
}

std::vector<Rational> psi(const Network& net, std::span<const Rational> x) {
  if (x.size() != net.species_count())
    throw Error(ErrorKind::Internal, "state vector has the wrong length");
  for (const auto& v : x)
    if (sgn(v) < 0) throw Error(ErrorKind::Internal, "mass-action vector needs x >= 0");
  std::vector<Rational> out;
  out.reserve(net.complex_count());
  for (const auto& c : net.complexes()) out.push_back(monomial_value(c, x));
  return out;
}

std::vector<Rational> rhs(const Network& net, std::span<const Rational> x) {
  std::vector<Rational> rates = psi(net, x);
  return coefficient_matrix(net) * std::span<const Rational>(rates);
}

Network canonical_realization(const PolySystem& system) {
  system.validate();
  const std::size_t n = system.species.size();
  std::vector<Complex> complexes;
  std::map<Complex, std::size_t> index;
  auto intern = [&](const Complex& c) {
    auto [it, inserted] = index.try_emplace(c, complexes.size());
    if (inserted) complexes.push_back(c);
    return it->second;
  };
  std::map<std::pair<std::size_t, std::size_t>, Rational> rates;
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < system.equations[i].size(); ++t) {
      const Term& term = system.equations[i][t];
      bool negative = sgn(term.coefficient) < 0;
      if (negative && term.exponents[i] < 1)
        throw Error(ErrorKind::NonKinetic,
                    "term " + std::to_string(t + 1) + " of d" + system.species[i] +
                        "/dt is negative but does not contain " + system.species[i] +
                        " (cross-negative effect)");
      Complex target = term.exponents;
      target[i] += negative ? -1 : 1;
      std::size_t s = intern(term.exponents);
      std::size_t d = intern(target);
      auto [it, inserted] = rates.try_emplace({s, d}, 0);
      if (inserted) order.push_back({s, d});
      it->second += abs(term.coefficient);
    }
  }
  std::vector<Reaction> reactions;
  for (const auto& key : order) reactions.push_back({key.first, key.second, rates[key]});
  return Network(system.species, std::move(complexes), std::move(reactions));
}

ConjugacyCheck verify_linear_conjugacy(const Network& source, const Network& target,
                                       std::span<const Rational> c) {
  const std::size_t n = source.species_count();
  if (target.species_count() != n)
    throw Error(ErrorKind::SpeciesMismatch, "networks have different species counts");
  // perm[i]: index in target of source species i
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto found = target.find_species(source.species()[i]);
    if (!found)
      throw Error(ErrorKind::SpeciesMismatch,
                  "species '" + source.species()[i] + "' missing from the second network");
    perm[i] = *found;
  }
  if (c.size() != n)
    throw Error(ErrorKind::Internal, "conjugacy vector has the wrong length");
  for (const auto& ci : c)
    if (sgn(ci) <= 0) throw Error(ErrorKind::Internal, "conjugacy constants must be positive");

  CoefficientMap expected;
  for (const auto& [mono, column] : coefficient_map(source)) {
    Rational scale = monomial_value(mono, c);
    std::vector<Rational> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = column[i] * scale / c[i];
    expected.emplace(mono, std::move(scaled));
  }
  CoefficientMap actual;
  for (const auto& [mono, column] : coefficient_map(target)) {
    Complex aligned(n);
    std::vector<Rational> col(n);
    for (std::size_t i = 0; i < n; ++i) {
      aligned[i] = mono[perm[i]];
      col[i] = column[perm[i]];
    }
    actual.emplace(std::move(aligned), std::move(col));
  }

  ConjugacyCheck check;
  std::set<Complex> keys;
  for (const auto& kv : expected) keys.insert(kv.first);
  for (const auto& kv : actual) keys.insert(kv.first);
  const std::vector<Rational> zero(n);
  for (const auto& key : keys) {
    auto e = expected.find(key);
    auto a = actual.find(key);
    const auto& ev = e == expected.end() ? zero : e->second;
    const auto& av = a == actual.end() ? zero : a->second;
    for (std::size_t i = 0; i < n; ++i) {
      Rational diff = av[i] - ev[i];
      if (sgn(diff) != 0) check.residuals.push_back({key, i, diff});
    }
  }
  check.conjugate = check.residuals.empty();
  return check;
}

ConjugacyCheck verify_linear_conjugacy(const ConjugacyWitness& witness) {
  return verify_linear_conjugacy(witness.source, witness.target, witness.c);
}

std::vector<Rational> complex_balance_residual(const Network& net,
                                               std::span<const Rational> xstar) {
  std::vector<Rational> rates = psi(net, xstar);
  return kinetics_matrix(net) * std::span<const Rational>(rates);
}

}  // namespace mindef
