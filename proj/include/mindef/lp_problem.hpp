#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mindef/rational.hpp"

namespace mindef {

enum class RowSense { LessEqual, GreaterEqual, Equal };
enum class ObjectiveSense { Minimize, Maximize };

struct LpTerm {
  std::size_t column;
  Rational coefficient;
};

struct LpRow {
  std::string name;
  std::vector<LpTerm> terms;
  RowSense sense = RowSense::LessEqual;
  Rational rhs;
  /// Solver hint: the row is rarely binding and may be held back until a
  /// relaxation violates it. It is still part of the model.
  bool lazy = false;
};

struct LpColumn {
  std::string name;
  std::optional<Rational> lower = Rational(0);  // nullopt = -infinity
  std::optional<Rational> upper;                // nullopt = +infinity
  Rational objective;
  bool integral = false;
};

/// A linear (or mixed-integer) program with exact coefficients. Floating
/// solvers convert on the way in; checks can then be done exactly.
struct LpProblem {
  std::string name = "model";
  ObjectiveSense sense = ObjectiveSense::Minimize;
  std::vector<LpColumn> columns;
  std::vector<LpRow> rows;

  std::size_t add_column(LpColumn column);
  std::size_t add_row(LpRow row);

  std::size_t column_count() const { return columns.size(); }
  std::size_t row_count() const { return rows.size(); }
  std::size_t integral_count() const;

  std::optional<std::size_t> find_column(const std::string& name) const;

  /// Throws Error(Internal) on out-of-range columns, inverted bounds, or an
  /// integral column without finite bounds.
  void validate() const;
};

Rational evaluate_objective(const LpProblem& problem, const std::vector<Rational>& values);
double evaluate_objective(const LpProblem& problem, const std::vector<double>& values);

}  // namespace mindef
