#include "mindef/lp_problem.hpp"

#include "mindef/error.hpp"

namespace mindef {

std::size_t LpProblem::add_column(LpColumn column) {
  columns.push_back(std::move(column));
  return columns.size() - 1;
}

std::size_t LpProblem::add_row(LpRow row) {
  rows.push_back(std::move(row));
  return rows.size() - 1;
}

std::size_t LpProblem::integral_count() const {
  std::size_t count = 0;
  for (const auto& c : columns) count += c.integral ? 1 : 0;
  return count;
}

std::optional<std::size_t> LpProblem::find_column(const std::string& column_name) const {
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (columns[j].name == column_name) return j;
  return std::nullopt;
}

void LpProblem::validate() const {
  for (const auto& c : columns) {
    if (c.lower && c.upper && *c.lower > *c.upper)
      throw Error(ErrorKind::Internal, "column " + c.name + " has inverted bounds");
    if (c.integral && (!c.lower || !c.upper))
      throw Error(ErrorKind::Internal, "integral column " + c.name + " needs finite bounds");
  }
  for (const auto& r : rows)
    for (const auto& t : r.terms)
      if (t.column >= columns.size())
        throw Error(ErrorKind::Internal, "row " + r.name + " references an unknown column");
}

Rational evaluate_objective(const LpProblem& problem, const std::vector<Rational>& values) {
  Rational total = 0;
  for (std::size_t j = 0; j < problem.columns.size(); ++j)
    if (sgn(problem.columns[j].objective) != 0) total += problem.columns[j].objective * values[j];
  return total;
}

double evaluate_objective(const LpProblem& problem, const std::vector<double>& values) {
  double total = 0;
  for (std::size_t j = 0; j < problem.columns.size(); ++j)
    total += problem.columns[j].objective.get_d() * values[j];
  return total;
}

}  // namespace mindef
