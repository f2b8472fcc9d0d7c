#include "doctest.h"

#include "mindef/error.hpp"
#include "mindef/structure.hpp"
#include "mindef/text_format.hpp"
#include "support.hpp"

using namespace mindef;
using testing::make_network;

namespace {

std::vector<Rational> q(std::initializer_list<long> values) {
  std::vector<Rational> out;
  for (long v : values) out.push_back(Rational(v));
  return out;
}

// The deficiency-zero network found for the three-species ODE, with rates
// that make it conjugate under c = (1, 2, 1).
Network example_two_realization() {
  std::vector<Complex> cs = {{0, 0, 0}, {2, 0, 0}, {1, 0, 0}, {0, 1, 1}, {0, 2, 0}, {0, 0, 2}};
  std::vector<Reaction> r = {{0, 1, Rational(1, 2)}, {1, 0, Rational(1, 2)},
                             {2, 3, Rational(1)},    {3, 2, Rational(2)},
                             {4, 5, Rational(2)},    {5, 4, Rational(1, 2)}};
  return Network({"X1", "X2", "X3"}, cs, r);
}

Network scaled(const Network& net, const std::vector<Rational>& c) {
  // A network conjugate to `net` under c: rates scaled by Psi(c) and the
  // species factor. Only valid when each reaction changes a single species
  // by one unit, which holds for canonical networks.
  std::vector<Reaction> r;
  for (const auto& x : net.reactions()) {
    const auto& a = net.complexes()[x.source];
    const auto& b = net.complexes()[x.target];
    std::size_t i = 0;
    while (a[i] == b[i]) ++i;
    r.push_back({x.source, x.target, x.rate * monomial_value(a, c) / c[i]});
  }
  return Network(net.species(), net.complexes(), r);
}

}  // namespace

TEST_CASE("coefficient matrix") {
  Network pair = testing::reversible_pair(3, 5);
  CHECK(coefficient_matrix(pair) == kinetics_matrix(pair));
  Network idle = make_network({"A", "B"}, {{1, 0}, {0, 1}}, {});
  CHECK(coefficient_matrix(idle).is_zero());

  Matrix m = coefficient_matrix(canonical_realization(testing::load_ode("example2.ode")));
  const long expected[3][13] = {{1, -1, -1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                                {0, 2, 0, -2, 0, 0, 0, -2, 0, 2, 0, 0, 0},
                                {0, 1, 0, -1, 0, 0, 0, 1, 0, -1, 0, 0, 0}};
  REQUIRE(m.rows() == 3);
  REQUIRE(m.cols() == 13);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 13; ++j) CHECK(m(i, j) == expected[i][j]);
}

TEST_CASE("psi and rhs") {
  Network pair = testing::reversible_pair(1, 2);
  CHECK(psi(pair, q({1, 1})) == q({1, 1}));
  Network one = make_network({"X1", "X2", "X3"}, {{0, 2, 1}}, {});
  CHECK(psi(one, q({1, 2, 3})) == q({12}));

  Network ex2 = canonical_realization(testing::load_ode("example2.ode"));
  CHECK(psi(ex2, q({1, 2, 1})) == q({1, 1, 1, 2, 2, 2, 1, 4, 2, 1, 2, 1, 4}));

  CHECK(rhs(pair, q({2, 1})) == q({0, 0}));
  CHECK(rhs(make_network({"A"}, {{1}, {0}}, {}), q({5})) == q({0}));

  PolySystem p = testing::load_ode("example2.ode");
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(1, 40), den(1, 9);
  for (int t = 0; t < 10; ++t) {
    std::vector<Rational> x;
    for (int i = 0; i < 3; ++i) x.push_back(Rational(num(rng), den(rng)));
    for (auto& v : x) v.canonicalize();
    CHECK(rhs(ex2, x) == p.evaluate(x));
  }
}

TEST_CASE("canonical realization") {
  PolySystem p{{"X1"}, {{{{0}, Rational(1)}, {{1}, Rational(-1)}}}};
  Network n = canonical_realization(p);
  CHECK(n.reactions().size() == 2);
  CHECK(n.complexes() == std::vector<Complex>{{0}, {1}});
  CHECK(n.rate(0, 1) == 1);
  CHECK(n.rate(1, 0) == 1);

  PolySystem bad{{"X1"}, {{{{0}, Rational(-1)}}}};
  try {
    canonical_realization(bad);
    FAIL("expected NonKinetic");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonKinetic);
  }

  Network ex2 = canonical_realization(testing::load_ode("example2.ode"));
  CHECK(ex2.complex_count() == 13);
  const std::vector<Complex> listed = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 1}, {1, 1, 1},
                                       {1, 1, 0}, {0, 0, 1}, {0, 2, 0}, {0, 1, 0}, {0, 0, 2},
                                       {0, 1, 2}, {1, 0, 1}, {0, 2, 1}};
  CHECK(ex2.complexes() == listed);
  CHECK(deficiency(ex2) == 8);
  CHECK_FALSE(is_weakly_reversible(ex2));
}

TEST_CASE("linear conjugacy verification") {
  Network ex1 = testing::load_network("example1_rates10.net");
  CHECK(verify_linear_conjugacy(ex1, ex1, q({1, 1, 1})).conjugate);

  auto check = verify_linear_conjugacy(ex1, testing::load_network("figure5b.net"), q({1, 1, 1}));
  CHECK_FALSE(check.conjugate);
  CHECK_FALSE(check.residuals.empty());

  Network ex2 = canonical_realization(testing::load_ode("example2.ode"));
  CHECK(verify_linear_conjugacy(ex2, example_two_realization(), q({1, 2, 1})).conjugate);
  CHECK_FALSE(verify_linear_conjugacy(ex2, example_two_realization(), q({1, 1, 1})).conjugate);

  Network other = make_network({"X1", "Q"}, {{1, 0}, {0, 1}}, {{0, 1, 1}});
  try {
    verify_linear_conjugacy(testing::reversible_pair(), other, q({1, 1}));
    FAIL("expected SpeciesMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SpeciesMismatch);
  }
}

TEST_CASE("figure 5(a) as printed: one rate is off") {
  // With k(5,6) = 3 the T100 + T001 column misses by 5 in both the T100 and
  // T010 rows; k(5,6) = 8 closes it. The other 17 rates check out.
  Network src = testing::load_network("example1_rates10.net");
  std::string text = testing::read_text(testing::data_path("figure5a.net"));
  auto check = verify_linear_conjugacy(src, parse_network(text), q({1, 1, 1}));
  CHECK_FALSE(check.conjugate);
  CHECK(check.residuals.size() == 2);

  const std::string printed = "3 : T100 + T001 -> T010 + T001";
  auto at = text.find(printed);
  REQUIRE(at != std::string::npos);
  text.replace(at, 1, "8");
  CHECK(verify_linear_conjugacy(src, parse_network(text), q({1, 1, 1})).conjugate);
}

TEST_CASE("complex balance residual") {
  Network pair = testing::reversible_pair(1, 2);
  CHECK(complex_balance_residual(pair, q({2, 1})) == q({0, 0}));
  CHECK(complex_balance_residual(pair, q({1, 1})) == q({1, -1}));
  Network idle = make_network({"A"}, {{1}, {2}}, {});
  CHECK(complex_balance_residual(idle, q({3})) == q({0, 0}));

  // Y times the residual is the right-hand side.
  Network ex1 = testing::load_network("example1_rates11.net");
  auto x = q({2, 3, 5});
  auto res = complex_balance_residual(ex1, x);
  CHECK(stoichiometric_matrix(ex1) * std::span<const Rational>(res) == rhs(ex1, x));
}

TEST_CASE("random kinetic systems: canonical realization reproduces coefficients") {
  std::mt19937 rng(99);
  for (int t = 0; t < 100; ++t) {
    PolySystem p = testing::random_kinetic_system(rng, 1 + rng() % 3, 1 + rng() % 5, 2);
    Network n = canonical_realization(p);
    CAPTURE(t);
    CHECK(coefficient_map(n) == coefficient_map(p));
    CHECK(verify_linear_conjugacy(n, n, std::vector<Rational>(p.species.size(), Rational(1)))
              .conjugate);
  }
}

TEST_CASE("random kinetic systems: conjugacy composes") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> num(1, 6), den(1, 4);
  for (int t = 0; t < 60; ++t) {
    PolySystem p = testing::random_kinetic_system(rng, 2 + rng() % 2, 1 + rng() % 4, 2);
    Network n = canonical_realization(p);
    std::vector<Rational> c, d, cd;
    for (std::size_t i = 0; i < p.species.size(); ++i) {
      c.push_back(Rational(num(rng), den(rng)));
      d.push_back(Rational(num(rng), den(rng)));
      c.back().canonicalize();
      d.back().canonicalize();
      cd.push_back(c.back() * d.back());
    }
    Network n1 = scaled(n, c);
    Network n2 = scaled(n1, d);
    CAPTURE(t);
    REQUIRE(verify_linear_conjugacy(n, n1, c).conjugate);
    REQUIRE(verify_linear_conjugacy(n1, n2, d).conjugate);
    CHECK(verify_linear_conjugacy(n, n2, cd).conjugate);
  }
}
