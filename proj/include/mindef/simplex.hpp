#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mindef/lp_problem.hpp"

namespace mindef {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus status);

struct SimplexOptions {
  std::size_t iteration_limit = 0;  // 0: scaled to the problem size
  /// Consecutive pivots without progress in the phase objective tolerated
  /// under the largest-coefficient rule before switching to Bland's rule.
  std::size_t degenerate_before_bland = 50;
  /// Pivots without progress after which the floating-point solve() gives up
  /// and reports IterationLimit; 0 disables the check.
  std::size_t stall_limit = 3000;
  std::size_t refactor_interval = 100;  // floating point only
  // Tolerances apply to the floating-point instantiation only.
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-9;
};

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, Free };

/// Snapshot of a simplex basis: one status per variable (structural columns
/// first, then one slack per row in the order rows were added).
struct Basis {
  std::vector<VarStatus> status;
};

/// Bounded-variable primal simplex on a revised form with an explicit dense
/// basis inverse. Each row gets a bounded slack so every constraint becomes
/// an equality. Phase 1 minimizes the sum of bound violations from any
/// starting basis, which is what makes warm starts after bound changes or row
/// additions work.
///
/// `Real` is `double` (tolerances from SimplexOptions, periodic
/// refactorization) or `Rational` (exact, zero tolerances).
template <typename Real>
class BoundedSimplex {
 public:
  /// Loads every row of `problem`, or only its non-lazy rows when
  /// `defer_lazy_rows` is set (the caller adds the others with add_row).
  explicit BoundedSimplex(const LpProblem& problem, SimplexOptions options = {},
                          bool defer_lazy_rows = false);

  std::size_t column_count() const { return n_; }
  std::size_t row_count() const { return m_; }

  void set_column_bounds(std::size_t column, std::optional<Real> lower,
                         std::optional<Real> upper);
  void add_row(const LpRow& row);

  LpStatus solve();

  /// Structural values after solve().
  std::vector<Real> values() const;
  /// Objective in the problem's own sense.
  Real objective() const;
  std::size_t iterations() const { return total_iterations_; }

  Basis basis() const;
  void set_basis(const Basis& basis);
  void reset_to_slack_basis();

 private:
  bool refactor();
  void compute_basic_values();
  Real nonbasic_value(std::size_t var) const;
  bool is_fixed(std::size_t var) const;
  void snap_status(std::size_t var);

  SimplexOptions options_;
  bool maximize_ = false;
  std::size_t n_ = 0;
  std::size_t m_ = 0;

  std::vector<std::vector<std::pair<std::size_t, Real>>> columns_;  // structural only
  std::vector<Real> rhs_;
  std::vector<Real> cost_;
  std::vector<Real> lower_, upper_;
  std::vector<char> has_lower_, has_upper_;

  std::vector<VarStatus> status_;
  std::vector<Real> x_;
  std::vector<std::size_t> head_;        // basis position -> variable
  std::vector<std::ptrdiff_t> position_; // variable -> basis position or -1
  std::vector<std::vector<Real>> binv_;  // binv_[position][row]

  bool needs_refactor_ = true;
  std::size_t since_refactor_ = 0;
  std::size_t total_iterations_ = 0;
};

extern template class BoundedSimplex<double>;
extern template class BoundedSimplex<Rational>;

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;
  double objective = 0;
  std::size_t iterations = 0;
};

struct ExactLpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> values;
  Rational objective;
  std::size_t iterations = 0;
};

/// Solves the continuous relaxation (integrality ignored) in floating point.
LpResult solve_lp(const LpProblem& problem, const SimplexOptions& options = {});

/// Same, in exact rational arithmetic.
ExactLpResult solve_lp_exact(const LpProblem& problem, const SimplexOptions& options = {});

}  // namespace mindef
