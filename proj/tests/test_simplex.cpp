#include "doctest.h"

#include <cmath>
#include <random>

#include "mindef/simplex.hpp"

using namespace mindef;

namespace {

LpTerm term(std::size_t col, long value) { return LpTerm{col, Rational(value)}; }

// Brute force: every vertex of a 3-variable box-bounded polytope is the
// intersection of three active constraints (rows or bounds).
struct Plane {
  Rational a[3];
  Rational b;
};

std::optional<Rational> vertex_optimum(const LpProblem& p) {
  std::vector<Plane> planes;
  for (std::size_t j = 0; j < 3; ++j) {
    Plane lo{}, hi{};
    lo.a[j] = 1;
    lo.b = *p.columns[j].lower;
    hi.a[j] = 1;
    hi.b = *p.columns[j].upper;
    planes.push_back(lo);
    planes.push_back(hi);
  }
  for (const auto& row : p.rows) {
    Plane pl{};
    for (const auto& t : row.terms) pl.a[t.column] += t.coefficient;
    pl.b = row.rhs;
    planes.push_back(pl);
  }
  auto feasible = [&](const Rational* x) {
    for (std::size_t j = 0; j < 3; ++j)
      if (x[j] < *p.columns[j].lower || x[j] > *p.columns[j].upper) return false;
    for (const auto& row : p.rows) {
      Rational act = 0;
      for (const auto& t : row.terms) act += t.coefficient * x[t.column];
      if (row.sense == RowSense::LessEqual && act > row.rhs) return false;
      if (row.sense == RowSense::GreaterEqual && act < row.rhs) return false;
      if (row.sense == RowSense::Equal && act != row.rhs) return false;
    }
    return true;
  };
  std::optional<Rational> best;
  const std::size_t k = planes.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (std::size_t l = j + 1; l < k; ++l) {
        Rational m[3][4];
        const Plane* sel[3] = {&planes[i], &planes[j], &planes[l]};
        for (int r = 0; r < 3; ++r) {
          for (int c = 0; c < 3; ++c) m[r][c] = sel[r]->a[c];
          m[r][3] = sel[r]->b;
        }
        bool singular = false;
        for (int c = 0; c < 3 && !singular; ++c) {
          int piv = -1;
          for (int r = c; r < 3; ++r)
            if (sgn(m[r][c]) != 0) {
              piv = r;
              break;
            }
          if (piv < 0) {
            singular = true;
            break;
          }
          for (int cc = 0; cc < 4; ++cc) std::swap(m[c][cc], m[piv][cc]);
          for (int r = 0; r < 3; ++r) {
            if (r == c || sgn(m[r][c]) == 0) continue;
            Rational f = m[r][c] / m[c][c];
            for (int cc = 0; cc < 4; ++cc) m[r][cc] -= f * m[c][cc];
          }
        }
        if (singular) continue;
        Rational x[3] = {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
        if (!feasible(x)) continue;
        Rational obj = 0;
        for (std::size_t c = 0; c < 3; ++c) obj += p.columns[c].objective * x[c];
        if (p.sense == ObjectiveSense::Maximize) obj = -obj;
        if (!best || obj < *best) best = obj;
      }
  if (best && p.sense == ObjectiveSense::Maximize) best = -*best;
  return best;
}

// Vertex enumeration in any dimension, in doubles: every choice of n active
// planes among bounds and rows, solved by Gaussian elimination.
std::optional<double> vertex_optimum_float(const LpProblem& p) {
  const std::size_t n = p.columns.size();
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& bound : {p.columns[j].lower, p.columns[j].upper}) {
      std::vector<double> row(n, 0.0);
      row[j] = 1;
      a.push_back(row);
      b.push_back(bound->get_d());
    }
  for (const auto& r : p.rows) {
    std::vector<double> row(n, 0.0);
    for (const auto& t : r.terms) row[t.column] += t.coefficient.get_d();
    a.push_back(row);
    b.push_back(r.rhs.get_d());
  }
  const double tol = 1e-9;
  auto feasible = [&](const std::vector<double>& x) {
    for (std::size_t j = 0; j < n; ++j)
      if (x[j] < p.columns[j].lower->get_d() - tol || x[j] > p.columns[j].upper->get_d() + tol)
        return false;
    for (const auto& r : p.rows) {
      double act = 0;
      for (const auto& t : r.terms) act += t.coefficient.get_d() * x[t.column];
      const double rhs = r.rhs.get_d();
      if (r.sense == RowSense::LessEqual && act > rhs + tol) return false;
      if (r.sense == RowSense::GreaterEqual && act < rhs - tol) return false;
      if (r.sense == RowSense::Equal && std::abs(act - rhs) > tol) return false;
    }
    return true;
  };
  std::optional<double> best;
  std::vector<std::size_t> pick(n);
  for (std::size_t i = 0; i < n; ++i) pick[i] = i;
  const std::size_t k = a.size();
  while (true) {
    std::vector<std::vector<double>> m(n, std::vector<double>(n + 1));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) m[r][c] = a[pick[r]][c];
      m[r][n] = b[pick[r]];
    }
    bool singular = false;
    for (std::size_t c = 0; c < n && !singular; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < n; ++r)
        if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
      if (std::abs(m[piv][c]) < 1e-9) {
        singular = true;
        break;
      }
      std::swap(m[c], m[piv]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || m[r][c] == 0) continue;
        const double f = m[r][c] / m[c][c];
        for (std::size_t cc = c; cc <= n; ++cc) m[r][cc] -= f * m[c][cc];
      }
    }
    if (!singular) {
      std::vector<double> x(n);
      for (std::size_t r = 0; r < n; ++r) x[r] = m[r][n] / m[r][r];
      if (feasible(x)) {
        double obj = 0;
        for (std::size_t c = 0; c < n; ++c) obj += p.columns[c].objective.get_d() * x[c];
        if (!best || (p.sense == ObjectiveSense::Minimize ? obj < *best : obj > *best)) best = obj;
      }
    }
    // Next n-subset of k planes in lexicographic order.
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == k - n + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

}  // namespace

TEST_CASE("single bounded column goes to its upper bound") {
  LpProblem p;
  p.sense = ObjectiveSense::Maximize;
  p.add_column({"x", Rational(0), Rational(3), Rational(1), false});
  auto r = solve_lp(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.values[0] == doctest::Approx(3));
  auto e = solve_lp_exact(p);
  CHECK(e.values[0] == 3);
}

TEST_CASE("small epsilon coefficient row") {
  LpProblem p;
  p.add_column({"t", Rational(0), Rational(1), Rational(-1), false});
  p.add_row({"r", {LpTerm{0, Rational(1, 100000)}}, RowSense::LessEqual, Rational(2), false});
  auto e = solve_lp_exact(p);
  REQUIRE(e.status == LpStatus::Optimal);
  CHECK(e.objective == -1);
}

TEST_CASE("infeasible and unbounded are reported") {
  LpProblem p;
  p.add_column({"x", Rational(0), std::nullopt, Rational(-1), false});
  p.add_column({"y", Rational(0), std::nullopt, Rational(0), false});
  p.add_row({"r", {term(0, 1), term(1, -1)}, RowSense::LessEqual, Rational(1), false});
  CHECK(solve_lp(p).status == LpStatus::Unbounded);
  p.add_row({"s", {term(0, 1), term(1, 1)}, RowSense::LessEqual, Rational(-1), false});
  CHECK(solve_lp(p).status == LpStatus::Infeasible);
  CHECK(solve_lp_exact(p).status == LpStatus::Infeasible);
}

TEST_CASE("free variables and equality rows") {
  LpProblem p;
  p.add_column({"x", std::nullopt, std::nullopt, Rational(1), false});
  p.add_column({"y", std::nullopt, Rational(4), Rational(1), false});
  p.add_row({"e", {term(0, 1), term(1, -2)}, RowSense::Equal, Rational(-3), false});
  p.add_row({"g", {term(0, 1)}, RowSense::GreaterEqual, Rational(-10), false});
  // x = 2y - 3, objective 3y - 3 minimized at x = -10 -> y = -7/2
  auto e = solve_lp_exact(p);
  REQUIRE(e.status == LpStatus::Optimal);
  CHECK(e.values[0] == -10);
  CHECK(e.values[1] == Rational(-7, 2));
}

TEST_CASE("random three-variable programs match vertex enumeration") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> bound(1, 6);
  std::uniform_int_distribution<int> sense(0, 2);
  int optimal = 0;
  for (int trial = 0; trial < 200; ++trial) {
    LpProblem p;
    p.sense = trial % 2 ? ObjectiveSense::Maximize : ObjectiveSense::Minimize;
    for (int j = 0; j < 3; ++j)
      p.add_column({"x" + std::to_string(j), Rational(-bound(rng)), Rational(bound(rng)),
                    Rational(coef(rng)), false});
    const int rows = 1 + trial % 4;
    for (int i = 0; i < rows; ++i) {
      LpRow row;
      row.name = "r" + std::to_string(i);
      for (std::size_t j = 0; j < 3; ++j) row.terms.push_back(term(j, coef(rng)));
      row.sense = static_cast<RowSense>(sense(rng) == 2 && i == 0 ? 2 : sense(rng) % 2);
      row.rhs = coef(rng);
      p.add_row(row);
    }
    auto oracle = vertex_optimum(p);
    auto e = solve_lp_exact(p);
    auto d = solve_lp(p);
    if (!oracle) {
      CHECK(e.status == LpStatus::Infeasible);
      CHECK(d.status == LpStatus::Infeasible);
      continue;
    }
    ++optimal;
    REQUIRE(e.status == LpStatus::Optimal);
    CHECK(e.objective == *oracle);
    REQUIRE(d.status == LpStatus::Optimal);
    CHECK(d.objective == doctest::Approx(oracle->get_d()).epsilon(1e-9));
  }
  CHECK(optimal > 50);
}

TEST_CASE("random 5x8 programs match vertex enumeration") {
  std::mt19937 rng(58);
  std::uniform_int_distribution<int> coef(-6, 6), bound(1, 4), sense(0, 2);
  int optimal = 0;
  for (int trial = 0; trial < 12; ++trial) {
    LpProblem p;
    p.sense = trial % 2 ? ObjectiveSense::Maximize : ObjectiveSense::Minimize;
    for (int j = 0; j < 8; ++j)
      p.add_column({"x" + std::to_string(j), Rational(-bound(rng)), Rational(bound(rng)),
                    Rational(coef(rng)), false});
    for (int i = 0; i < 5; ++i) {
      LpRow row;
      row.name = "r" + std::to_string(i);
      for (std::size_t j = 0; j < 8; ++j)
        if (int v = coef(rng)) row.terms.push_back(term(j, v));
      row.sense = static_cast<RowSense>(i == 0 ? sense(rng) : sense(rng) % 2);
      row.rhs = coef(rng);
      p.add_row(row);
    }
    CAPTURE(trial);
    auto oracle = vertex_optimum_float(p);
    auto d = solve_lp(p);
    auto e = solve_lp_exact(p);
    if (!oracle) {
      CHECK(d.status == LpStatus::Infeasible);
      CHECK(e.status == LpStatus::Infeasible);
      continue;
    }
    ++optimal;
    REQUIRE(d.status == LpStatus::Optimal);
    REQUIRE(e.status == LpStatus::Optimal);
    CHECK(std::abs(d.objective - *oracle) <= 1e-9 * std::max(1.0, std::abs(*oracle)));
    CHECK(std::abs(e.objective.get_d() - *oracle) <= 1e-9 * std::max(1.0, std::abs(*oracle)));
  }
  CHECK(optimal >= 6);
}

TEST_CASE("warm start after a bound change and an added row") {
  LpProblem p;
  p.sense = ObjectiveSense::Maximize;
  p.add_column({"x", Rational(0), Rational(10), Rational(3), false});
  p.add_column({"y", Rational(0), Rational(10), Rational(2), false});
  p.add_row({"c", {term(0, 1), term(1, 1)}, RowSense::LessEqual, Rational(8), false});
  BoundedSimplex<Rational> s(p);
  REQUIRE(s.solve() == LpStatus::Optimal);
  CHECK(s.objective() == 24);
  s.set_column_bounds(0, Rational(0), Rational(5));
  REQUIRE(s.solve() == LpStatus::Optimal);
  CHECK(s.objective() == 21);
  s.add_row({"d", {term(1, 1)}, RowSense::LessEqual, Rational(1), false});
  REQUIRE(s.solve() == LpStatus::Optimal);
  CHECK(s.objective() == 17);
  Basis b = s.basis();
  BoundedSimplex<Rational> t(p);
  t.add_row({"d", {term(1, 1)}, RowSense::LessEqual, Rational(1), false});
  t.set_column_bounds(0, Rational(0), Rational(5));
  t.set_basis(b);
  REQUIRE(t.solve() == LpStatus::Optimal);
  CHECK(t.objective() == 17);
  CHECK(t.iterations() == 0);
}
