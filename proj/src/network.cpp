#include "mindef/network.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mindef/error.hpp"

namespace mindef {

Network::Network(std::vector<std::string> species, std::vector<Complex> complexes,
                 std::vector<Reaction> reactions)
    : species_(std::move(species)),
      complexes_(std::move(complexes)),
      reactions_(std::move(reactions)) {
  std::set<std::string> names;
  for (const auto& name : species_) {
    if (name.empty()) throw Error(ErrorKind::InvalidNetwork, "empty species name");
    if (!names.insert(name).second)
      throw Error(ErrorKind::InvalidNetwork, "species '" + name + "' declared twice");
  }
  std::map<Complex, std::size_t> seen;
  for (std::size_t j = 0; j < complexes_.size(); ++j) {
    const Complex& c = complexes_[j];
    if (c.size() != species_.size())
      throw Error(ErrorKind::InvalidNetwork,
                  "complex " + std::to_string(j + 1) + " has the wrong number of species");
    for (int coeff : c)
      if (coeff < 0)
        throw Error(ErrorKind::InvalidNetwork,
                    "complex " + std::to_string(j + 1) + " has a negative coefficient");
    auto [it, inserted] = seen.emplace(c, j);
    if (!inserted)
      throw Error(ErrorKind::DuplicateComplex,
                  "complexes " + std::to_string(it->second + 1) + " and " +
                      std::to_string(j + 1) + " are both '" + format_complex(c, species_) + "'");
  }
  for (const auto& r : reactions_) {
    if (r.source >= complexes_.size() || r.target >= complexes_.size())
      throw Error(ErrorKind::InvalidNetwork, "reaction references an unknown complex");
    if (r.source == r.target)
      throw Error(ErrorKind::InvalidNetwork,
                  "self-loop on complex '" + format_complex(complexes_[r.source], species_) + "'");
    if (sgn(r.rate) <= 0)
      throw Error(ErrorKind::InvalidNetwork, "rate constants must be strictly positive");
  }
  std::sort(reactions_.begin(), reactions_.end(), [](const Reaction& a, const Reaction& b) {
    return std::pair(a.source, a.target) < std::pair(b.source, b.target);
  });
  for (std::size_t i = 1; i < reactions_.size(); ++i)
    if (reactions_[i].source == reactions_[i - 1].source &&
        reactions_[i].target == reactions_[i - 1].target)
      throw Error(ErrorKind::DuplicateReaction,
                  "reaction '" + format_complex(complexes_[reactions_[i].source], species_) +
                      " -> " + format_complex(complexes_[reactions_[i].target], species_) +
                      "' listed twice");
}

std::optional<std::size_t> Network::find_complex(const Complex& complex) const {
  auto it = std::find(complexes_.begin(), complexes_.end(), complex);
  if (it == complexes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - complexes_.begin());
}

std::optional<std::size_t> Network::find_species(const std::string& name) const {
  auto it = std::find(species_.begin(), species_.end(), name);
  if (it == species_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - species_.begin());
}

Rational Network::rate(std::size_t source, std::size_t target) const {
  auto it = std::lower_bound(reactions_.begin(), reactions_.end(), std::pair(source, target),
                             [](const Reaction& r, const std::pair<std::size_t, std::size_t>& key) {
                               return std::pair(r.source, r.target) < key;
                             });
  if (it != reactions_.end() && it->source == source && it->target == target) return it->rate;
  return 0;
}

Network normalize_network(std::vector<std::string> species, std::vector<Complex> complexes,
                          std::vector<Reaction> reactions) {
  std::vector<Complex> unique = complexes;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  auto index_of = [&](const Complex& c) {
    return static_cast<std::size_t>(std::lower_bound(unique.begin(), unique.end(), c) -
                                    unique.begin());
  };
  std::map<std::pair<std::size_t, std::size_t>, Rational> merged;
  for (const auto& r : reactions) {
    if (r.source >= complexes.size() || r.target >= complexes.size())
      throw Error(ErrorKind::InvalidNetwork, "reaction references an unknown complex");
    std::size_t s = index_of(complexes[r.source]);
    std::size_t t = index_of(complexes[r.target]);
    if (s == t) continue;
    merged[{s, t}] += r.rate;
  }
  std::vector<Reaction> out;
  for (auto& [key, rate] : merged) out.push_back({key.first, key.second, rate});
  return Network(std::move(species), std::move(unique), std::move(out));
}

Matrix stoichiometric_matrix(const Network& net) {
  Matrix y(net.species_count(), net.complex_count());
  for (std::size_t j = 0; j < net.complex_count(); ++j)
    for (std::size_t i = 0; i < net.species_count(); ++i) y(i, j) = net.complexes()[j][i];
  return y;
}

Matrix kinetics_matrix(const Network& net) {
  Matrix a(net.complex_count(), net.complex_count());
  for (const auto& r : net.reactions()) {
    a(r.target, r.source) += r.rate;
    a(r.source, r.source) -= r.rate;
  }
  return a;
}

std::string format_complex(const Complex& complex, const std::vector<std::string>& species) {
  std::string out;
  for (std::size_t i = 0; i < complex.size(); ++i) {
    if (complex[i] == 0) continue;
    if (!out.empty()) out += " + ";
    if (complex[i] != 1) out += std::to_string(complex[i]) + " ";
    out += species[i];
  }
  return out.empty() ? "0" : out;
}

}  // namespace mindef
