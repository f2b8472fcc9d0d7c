#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "mindef/error.hpp"
#include "mindef/structure.hpp"
#include "support.hpp"

using namespace mindef;
using testing::make_network;

namespace {

Matrix from_rows(std::vector<std::vector<long>> rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

std::vector<std::size_t> counts(const StructuralReport& r) { return {r.m, r.ell, r.s}; }

// Same network with complexes relabelled by `perm` (new index of old complex i is perm[i]).
Network permuted(const Network& net, const std::vector<std::size_t>& perm) {
  std::vector<Complex> cs(net.complex_count());
  for (std::size_t i = 0; i < perm.size(); ++i) cs[perm[i]] = net.complexes()[i];
  std::vector<Reaction> r;
  for (const auto& x : net.reactions()) r.push_back({perm[x.source], perm[x.target], x.rate});
  return Network(net.species(), cs, r);
}

}  // namespace

TEST_CASE("network rejects invalid data") {
  CHECK_THROWS_AS(make_network({"A"}, {{1}, {1}}, {}), Error);
  CHECK_THROWS_AS(make_network({"A"}, {{1}, {0}}, {{0, 0, 1}}), Error);
  CHECK_THROWS_AS(make_network({"A"}, {{1}, {0}}, {{0, 1, 0}}), Error);
  CHECK_THROWS_AS(make_network({"A"}, {{1}, {0}}, {{0, 1, 1}, {0, 1, 2}}), Error);
  CHECK_THROWS_AS(make_network({"A"}, {{1}, {0}}, {{0, 5, 1}}), Error);
  CHECK_THROWS_AS(make_network({"A", "B"}, {{1}, {0}}, {}), Error);
  CHECK_THROWS_AS(make_network({"A"}, {{-1}, {0}}, {}), Error);
}

TEST_CASE("normalize_network sorts, merges and re-indexes") {
  std::vector<Reaction> r = {{0, 1, Rational(1)}, {2, 1, Rational(3)}, {0, 2, Rational(1)}};
  Network n = normalize_network({"A", "B"}, {{0, 1}, {1, 0}, {1, 0}}, r);
  // B sorts before A; the two copies of A merge, so 2 -> 1 becomes a self-loop
  // and the two B -> A reactions add up.
  REQUIRE(n.complex_count() == 2);
  CHECK(n.complexes()[0] == Complex{0, 1});
  CHECK(n.rate(0, 1) == 2);
  CHECK(n.rate(1, 0) == 0);
  CHECK(n.reactions().size() == 1);
}

TEST_CASE("stoichiometric matrix") {
  CHECK(stoichiometric_matrix(testing::reversible_pair()) == from_rows({{1, 0}, {0, 1}}));
  Network two_x = make_network({"X1", "X2"}, {{2, 0}}, {});
  CHECK(stoichiometric_matrix(two_x) == from_rows({{2}, {0}}));

  Network ex2 = canonical_realization(testing::load_ode("example2.ode"));
  CHECK(stoichiometric_matrix(ex2) == from_rows({{0, 1, 2, 0, 1, 1, 0, 0, 0, 0, 0, 1, 0},
                                                 {0, 0, 0, 1, 1, 1, 0, 2, 1, 0, 1, 0, 2},
                                                 {0, 0, 0, 1, 1, 0, 1, 0, 0, 2, 2, 1, 1}}));
}

TEST_CASE("kinetics matrix") {
  CHECK(kinetics_matrix(testing::reversible_pair(1, 2)) == from_rows({{-1, 2}, {1, -2}}));

  Network isolated = make_network({"A", "B"}, {{1, 0}, {0, 1}, {1, 1}}, {{0, 1, 3}});
  Matrix ak = kinetics_matrix(isolated);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(ak(2, j) == 0);
    CHECK(ak(j, 2) == 0);
  }

  // Hand construction: [A_k]_ij = k(j, i) = i for the 18 reactions, 1-based.
  Network ex1 = testing::load_network("example1_rates10.net");
  CHECK(ex1 == testing::example_one([](int, int j) { return j; }));
  Matrix expected(6, 6);
  const std::vector<Complex> cs = ex1.complexes();
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      if (i != j && testing::shares_species(cs[i], cs[j])) {
        expected(i, j) = Rational(long(i + 1));
        expected(j, j) -= Rational(long(i + 1));
      }
  Matrix got = kinetics_matrix(ex1);
  CHECK(got == expected);
  std::size_t support = 0;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) support += i != j && sgn(got(i, j)) > 0;
  CHECK(support == 18);
}

TEST_CASE("linkage classes") {
  Network ex1 = testing::load_network("example1_rates9.net");
  CHECK(linkage_classes(ex1) == std::vector<IndexSet>{{0, 1, 2, 3, 4, 5}});

  Network bare = make_network({"A"}, {{0}, {1}, {2}}, {});
  CHECK(linkage_classes(bare) == std::vector<IndexSet>{{0}, {1}, {2}});

  Network b = testing::load_network("figure5b.net");
  CHECK(linkage_classes(b) == std::vector<IndexSet>{{0, 5}, {1, 4}, {2, 3}});
}

TEST_CASE("strong components and weak reversibility") {
  Network cycle =
      make_network({"X1", "X2", "X3"}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
  auto sc = strong_components(cycle);
  REQUIRE(sc.size() == 1);
  CHECK(sc[0].terminal);
  CHECK(is_weakly_reversible(cycle));

  Network line = make_network({"X1", "X2"}, {{1, 0}, {0, 1}}, {{0, 1, 1}});
  sc = strong_components(line);
  REQUIRE(sc.size() == 2);
  CHECK(sc[0].complexes == IndexSet{0});
  CHECK_FALSE(sc[0].terminal);
  CHECK(sc[1].terminal);
  CHECK_FALSE(is_weakly_reversible(line));

  CHECK(is_weakly_reversible(testing::load_network("example1_rates9.net")));
  Network ex2 = canonical_realization(testing::load_ode("example2.ode"));
  CHECK_FALSE(is_weakly_reversible(ex2));
  sc = strong_components(ex2);
  CHECK(std::any_of(sc.begin(), sc.end(), [](const auto& c) { return !c.terminal; }));
}

TEST_CASE("stoichiometric subspace dimension and deficiency") {
  Network ex1 = testing::load_network("example1_rates9.net");
  CHECK(stoich_subspace_dim(ex1) == 2);
  CHECK(deficiency(ex1) == 3);
  CHECK(counts(analyze_structure(ex1)) == std::vector<std::size_t>{6, 1, 2});

  CHECK(stoich_subspace_dim(testing::reversible_pair()) == 1);
  CHECK(deficiency(testing::reversible_pair()) == 0);
  CHECK(stoich_subspace_dim(make_network({"A"}, {{0}, {1}}, {})) == 0);

  Network ex2 = canonical_realization(testing::load_ode("example2.ode"));
  CHECK(stoich_subspace_dim(ex2) == 3);
  CHECK(deficiency(ex2) == 8);
  CHECK(analyze_structure(ex2).m == 13);
}

TEST_CASE("deficiency one conditions") {
  auto b = deficiency_one_conditions(testing::load_network("figure5b.net"));
  // Each reversible pair alone has m=2, l=1, s=1.
  CHECK(b.class_deficiencies == std::vector<int>{0, 0, 0});
  CHECK(b.each_class_at_most_one);
  CHECK_FALSE(b.sum_matches_total);  // total deficiency is 1
  CHECK(b.single_terminal_per_class);
  CHECK_FALSE(b.all_satisfied);

  auto pair = deficiency_one_conditions(testing::reversible_pair());
  CHECK(pair.all_satisfied);

  auto ex1 = deficiency_one_conditions(testing::load_network("example1_rates9.net"));
  CHECK(ex1.class_deficiencies == std::vector<int>{3});
  CHECK_FALSE(ex1.each_class_at_most_one);
  CHECK_FALSE(ex1.all_satisfied);
}

TEST_CASE("random networks: invariants") {
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    Network net = testing::random_network(rng, 1 + rng() % 3, 2 + rng() % 6, 2, 0.3);
    StructuralReport r = analyze_structure(net);
    CAPTURE(trial);
    CHECK(r.delta >= 0);
    CHECK(r.delta == int(r.m) - int(r.ell) - int(r.s));

    // Kinetics matrix columns sum to zero; off-diagonals nonnegative.
    Matrix ak = kinetics_matrix(net);
    for (std::size_t j = 0; j < ak.cols(); ++j) {
      Rational sum;
      for (std::size_t i = 0; i < ak.rows(); ++i) {
        sum += ak(i, j);
        if (i != j) CHECK(sgn(ak(i, j)) >= 0);
      }
      CHECK(sum == 0);
    }

    // s via Y times the reaction incidence matrix.
    Matrix inc(net.complex_count(), net.reactions().size());
    for (std::size_t k = 0; k < net.reactions().size(); ++k) {
      inc(net.reactions()[k].target, k) += 1;
      inc(net.reactions()[k].source, k) -= 1;
    }
    CHECK(rank(stoichiometric_matrix(net) * inc) == r.s);

    // Linkage classes partition the complexes.
    std::vector<std::size_t> all;
    for (const auto& c : r.linkage_classes) all.insert(all.end(), c.begin(), c.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> iota(r.m);
    std::iota(iota.begin(), iota.end(), 0);
    CHECK(all == iota);

    // Weak reversibility: every strong component terminal, and then the
    // strong components are exactly the linkage classes.
    bool all_terminal = std::all_of(r.strong_components.begin(), r.strong_components.end(),
                                    [](const auto& c) { return c.terminal; });
    CHECK(r.weakly_reversible == all_terminal);
    if (r.weakly_reversible) CHECK(r.strong_components.size() == r.linkage_classes.size());

    // Relabelling complexes changes none of the counts.
    std::vector<std::size_t> perm(r.m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    StructuralReport q = analyze_structure(permuted(net, perm));
    CHECK(counts(q) == counts(r));
    CHECK(q.delta == r.delta);
    CHECK(q.weakly_reversible == r.weakly_reversible);
  }
}
