#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mindef/lp_problem.hpp"
#include "mindef/simplex.hpp"

namespace mindef {

enum class MilpStatus { Optimal, Infeasible, BoundExceeded, TimedOut };

const char* to_string(MilpStatus status);

/// Proposes integer values from a node relaxation. Only the entries of
/// integral columns are read; the engine fixes them and solves for the rest.
using RoundingHeuristic =
    std::function<std::optional<std::vector<double>>(const std::vector<double>& relaxation)>;

/// Final say on a candidate incumbent whose integral columns are integral.
/// Returning false means the assignment of integral columns admits no
/// feasible point; the engine then keeps branching instead of accepting it.
using IncumbentCertifier = std::function<bool(const std::vector<double>& values)>;

struct MilpConfig {
  double integrality_tol = 1e-6;
  double feasibility_tol = 1e-9;
  std::size_t node_limit = 1'000'000;
  double time_limit_seconds = 60;
  /// Accepted for interface compatibility; the search itself runs on the
  /// calling thread.
  unsigned threads = 1;
  /// When positive, every integral solution has an objective that is a
  /// multiple of this step, so nodes that cannot improve the incumbent by a
  /// full step are pruned.
  double objective_step = 0;
  RoundingHeuristic heuristic;
  IncumbentCertifier certify;
  std::size_t heuristic_frequency = 25;  // nodes between heuristic calls
  std::size_t lazy_batch = 200;          // lazy rows added per separation round
  SimplexOptions simplex;
};

struct MilpSolution {
  MilpStatus status = MilpStatus::Infeasible;
  std::vector<double> values;  // empty when no incumbent exists
  double objective = 0;
  std::size_t nodes = 0;
  /// Best proven bound in the problem's sense; equals the objective when the
  /// search completed.
  double best_bound = 0;
  std::size_t lp_iterations = 0;
  std::size_t rejected = 0;  // integral points refused by the certifier
  std::size_t exact_fallbacks = 0;  // node LPs re-solved in rational arithmetic
  double seconds = 0;

  bool has_incumbent() const { return !values.empty(); }
  double gap() const;
};

/// Branch and bound over the problem's integral columns: best-bound node
/// order (ties: deeper first, then creation order), most-fractional
/// branching with lowest-index tie-break, warm-started simplex at each node.
/// Rows marked lazy are held back until a relaxation violates them. A node
/// whose floating-point relaxation stalls is re-solved exactly.
MilpSolution solve_milp(const LpProblem& problem, const MilpConfig& config = {});

struct CheckOptions {
  double feasibility_tol = 1e-9;
  double integrality_tol = 1e-6;
  long max_denominator = 1'000'000'000;
};

struct RowResidual {
  std::size_t row;
  std::string name;
  Rational activity;
  /// How far the row is from satisfying its sense (0 when satisfied).
  Rational violation;
  bool flagged;
};

struct ColumnResidual {
  std::size_t column;
  std::string name;
  Rational value;
  Rational bound_violation;
  Rational integrality_gap;
  bool flagged;
};

struct ResidualReport {
  std::vector<RowResidual> rows;
  std::vector<ColumnResidual> columns;
  std::vector<Rational> values;  // the rationalized point
  Rational max_row_violation;
  Rational max_bound_violation;
  Rational max_integrality_gap;

  bool within_tolerance() const;
  std::size_t flagged_rows() const;
};

/// Rationalizes `values`, then evaluates every row, bound and integrality
/// condition exactly. A row is flagged when its violation exceeds the
/// tolerance scaled by max(1, |rhs|, largest |a_ij x_j|).
ResidualReport check_solution(const LpProblem& problem, const std::vector<double>& values,
                              const CheckOptions& options = {});
ResidualReport check_solution(const LpProblem& problem, const std::vector<Rational>& values,
                              const CheckOptions& options = {});

}  // namespace mindef
