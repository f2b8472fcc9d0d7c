#include "doctest.h"

#include <random>

#include "mindef/milp.hpp"

using namespace mindef;

namespace {

LpTerm term(std::size_t col, long value) { return LpTerm{col, Rational(value)}; }

// Enumerates every 0/1 assignment of the binary columns and solves the
// remaining continuous program exactly.
std::optional<Rational> enumerate_binaries(const LpProblem& p) {
  std::vector<std::size_t> bin;
  for (std::size_t j = 0; j < p.column_count(); ++j)
    if (p.columns[j].integral) bin.push_back(j);
  std::optional<Rational> best;
  for (unsigned mask = 0; mask < (1u << bin.size()); ++mask) {
    LpProblem q = p;
    for (std::size_t k = 0; k < bin.size(); ++k) {
      Rational v = (mask >> k) & 1u;
      q.columns[bin[k]].lower = v;
      q.columns[bin[k]].upper = v;
      q.columns[bin[k]].integral = false;
    }
    auto r = solve_lp_exact(q);
    if (r.status != LpStatus::Optimal) continue;
    Rational v = p.sense == ObjectiveSense::Minimize ? r.objective : Rational(-r.objective);
    if (!best || v < *best) best = v;
  }
  if (best && p.sense == ObjectiveSense::Maximize) best = -*best;
  return best;
}

LpProblem random_milp(std::mt19937& rng, int binaries, int continuous, int rows) {
  std::uniform_int_distribution<int> coef(-6, 6);
  LpProblem p;
  p.sense = rng() % 2 ? ObjectiveSense::Maximize : ObjectiveSense::Minimize;
  for (int j = 0; j < binaries; ++j)
    p.add_column({"b" + std::to_string(j), Rational(0), Rational(1), Rational(coef(rng)), true});
  for (int j = 0; j < continuous; ++j)
    p.add_column({"x" + std::to_string(j), Rational(0), Rational(5), Rational(coef(rng)), false});
  for (int i = 0; i < rows; ++i) {
    LpRow row;
    row.name = "r" + std::to_string(i);
    for (int j = 0; j < binaries + continuous; ++j) {
      int c = coef(rng);
      if (c != 0 && rng() % 3 != 0) row.terms.push_back(term(static_cast<std::size_t>(j), c));
    }
    row.sense = static_cast<RowSense>(rng() % 3 == 0 ? 2 : rng() % 2);
    row.rhs = coef(rng);
    row.lazy = rng() % 2 == 0;
    p.add_row(row);
  }
  return p;
}

}  // namespace

TEST_CASE("knapsack with two binaries") {
  LpProblem p;
  p.sense = ObjectiveSense::Maximize;
  p.add_column({"a", Rational(0), Rational(1), Rational(3), true});
  p.add_column({"b", Rational(0), Rational(1), Rational(2), true});
  p.add_row({"cap", {term(0, 1), term(1, 1)}, RowSense::LessEqual, Rational(1), false});
  auto s = solve_milp(p);
  REQUIRE(s.status == MilpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(3));
  CHECK(s.values[0] == 1);
  CHECK(s.values[1] == 0);
  CHECK(check_solution(p, s.values).within_tolerance());
}

TEST_CASE("fractional relaxation forces branching") {
  // max x + y, 2x + 2y <= 3 over binaries: relaxation 1.5, integer optimum 1
  LpProblem p;
  p.sense = ObjectiveSense::Maximize;
  p.add_column({"x", Rational(0), Rational(1), Rational(1), true});
  p.add_column({"y", Rational(0), Rational(1), Rational(1), true});
  p.add_row({"c", {term(0, 2), term(1, 2)}, RowSense::LessEqual, Rational(3), false});
  auto s = solve_milp(p);
  REQUIRE(s.status == MilpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1));
  CHECK(s.nodes > 1);
}

TEST_CASE("integer infeasibility is reported") {
  LpProblem p;
  p.add_column({"x", Rational(0), Rational(1), Rational(0), true});
  p.add_row({"half", {term(0, 2)}, RowSense::Equal, Rational(1), false});
  CHECK(solve_milp(p).status == MilpStatus::Infeasible);
}

TEST_CASE("node limit reports BoundExceeded with the open bound") {
  LpProblem p;
  p.sense = ObjectiveSense::Maximize;
  for (int j = 0; j < 6; ++j)
    p.add_column({"x" + std::to_string(j), Rational(0), Rational(1), Rational(1), true});
  LpRow row{"c", {}, RowSense::LessEqual, Rational(7), false};
  for (std::size_t j = 0; j < 6; ++j) row.terms.push_back(term(j, 2));
  p.add_row(row);
  MilpConfig config;
  config.node_limit = 1;
  auto s = solve_milp(p, config);
  CHECK(s.status == MilpStatus::BoundExceeded);
  CHECK(s.best_bound >= 3.5 - 1e-9);
}

TEST_CASE("random mixed programs agree with binary enumeration") {
  std::mt19937 rng(11);
  int feasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    LpProblem p = random_milp(rng, 2 + trial % 5, 1 + trial % 3, 2 + trial % 4);
    auto oracle = enumerate_binaries(p);
    auto s = solve_milp(p);
    if (!oracle) {
      CHECK(s.status == MilpStatus::Infeasible);
      continue;
    }
    ++feasible;
    REQUIRE(s.status == MilpStatus::Optimal);
    CHECK(s.objective == doctest::Approx(oracle->get_d()).epsilon(1e-9));
    CHECK(check_solution(p, s.values).within_tolerance());
  }
  CHECK(feasible > 15);
}

TEST_CASE("repeated solves are deterministic") {
  std::mt19937 rng(5);
  LpProblem p = random_milp(rng, 8, 3, 6);
  auto a = solve_milp(p);
  auto b = solve_milp(p);
  CHECK(a.status == b.status);
  CHECK(a.nodes == b.nodes);
  CHECK(a.values == b.values);
}

TEST_CASE("check_solution flags violated rows and fractional integers") {
  LpProblem p;
  p.add_column({"g1", Rational(0), Rational(1), Rational(0), true});
  p.add_column({"g2", Rational(0), Rational(1), Rational(0), true});
  p.add_row({"one", {term(0, 1), term(1, 1)}, RowSense::Equal, Rational(1), false});
  CHECK(check_solution(p, std::vector<double>{1, 0}).within_tolerance());
  auto bad = check_solution(p, std::vector<double>{0, 0});
  CHECK(bad.flagged_rows() == 1);
  CHECK(bad.max_row_violation == 1);
  auto frac = check_solution(p, std::vector<double>{0.5, 0.5});
  CHECK(frac.flagged_rows() == 0);
  CHECK_FALSE(frac.within_tolerance());
  CHECK(frac.max_integrality_gap == Rational(1, 2));

  LpProblem empty;
  auto none = check_solution(empty, std::vector<double>{});
  CHECK(none.rows.empty());
  CHECK(none.columns.empty());
}
