#include "support.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mindef/text_format.hpp"

namespace testing {

std::string data_path(const std::string& name) { return std::string(MINDEF_DATA_DIR) + "/" + name; }

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Network load_network(const std::string& name) {
  return mindef::parse_network(read_text(data_path(name)));
}

PolySystem load_ode(const std::string& name) {
  return mindef::parse_ode(read_text(data_path(name)));
}

Network make_network(std::vector<std::string> species, std::vector<Complex> complexes,
                     std::vector<std::tuple<std::size_t, std::size_t, long>> reactions) {
  std::vector<Reaction> r;
  for (auto [s, t, k] : reactions) r.push_back({s, t, Rational(k)});
  return Network(std::move(species), std::move(complexes), std::move(r));
}

Network reversible_pair(long a, long b) {
  return make_network({"X1", "X2"}, {{1, 0}, {0, 1}}, {{0, 1, a}, {1, 0, b}});
}

Network random_network(std::mt19937& rng, std::size_t species, std::size_t complexes,
                       int max_coef, double density) {
  std::uniform_int_distribution<int> coef(0, max_coef);
  std::bernoulli_distribution edge(density);
  std::uniform_int_distribution<int> num(1, 9), den(1, 4);
  std::set<Complex> seen;
  std::vector<Complex> cs;
  for (std::size_t tries = 0; cs.size() < complexes && tries < 50 * complexes; ++tries) {
    Complex c(species);
    for (auto& v : c) v = coef(rng);
    if (seen.insert(c).second) cs.push_back(c);
  }
  std::vector<Reaction> r;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (i != j && edge(rng)) r.push_back({i, j, Rational(num(rng), den(rng))});
  for (auto& x : r) x.rate.canonicalize();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < species; ++i) names.push_back("S" + std::to_string(i + 1));
  return Network(names, cs, r);
}

PolySystem random_kinetic_system(std::mt19937& rng, std::size_t species, std::size_t terms,
                                 int max_exp) {
  std::uniform_int_distribution<int> ex(0, max_exp), num(-9, 9), den(1, 5);
  PolySystem p;
  for (std::size_t i = 0; i < species; ++i) p.species.push_back("x" + std::to_string(i + 1));
  p.equations.resize(species);
  for (std::size_t i = 0; i < species; ++i) {
    std::set<Complex> seen;
    for (std::size_t t = 0; t < terms; ++t) {
      Complex a(species);
      for (auto& v : a) v = ex(rng);
      int n = num(rng);
      if (n == 0) continue;
      if (n < 0 && a[i] == 0) a[i] = 1;
      if (!seen.insert(a).second) continue;
      Rational c(n, den(rng));
      c.canonicalize();
      p.equations[i].push_back({a, c});
    }
  }
  return p;
}

}  // namespace testing
