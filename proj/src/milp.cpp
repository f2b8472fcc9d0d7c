#include "mindef/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

#include "mindef/error.hpp"

namespace mindef {

const char* to_string(MilpStatus status) {
  switch (status) {
    case MilpStatus::Optimal: return "Optimal";
    case MilpStatus::Infeasible: return "Infeasible";
    case MilpStatus::BoundExceeded: return "BoundExceeded";
    case MilpStatus::TimedOut: return "TimedOut";
  }
  return "Unknown";
}

double MilpSolution::gap() const {
  if (!has_incumbent()) return INFINITY;
  return std::fabs(objective - best_bound);
}

namespace {

struct DoubleRow {
  std::vector<std::pair<std::size_t, double>> terms;
  RowSense sense;
  double rhs;
};

DoubleRow to_double_row(const LpRow& row) {
  DoubleRow out{{}, row.sense, row.rhs.get_d()};
  for (const auto& t : row.terms) out.terms.push_back({t.column, t.coefficient.get_d()});
  return out;
}

// Relative violation of one row at x; 0 when satisfied within `tol`.
double row_violation(const DoubleRow& row, const std::vector<double>& x, double tol) {
  double activity = 0;
  double scale = std::max(1.0, std::fabs(row.rhs));
  for (const auto& [col, a] : row.terms) {
    double v = a * x[col];
    activity += v;
    scale = std::max(scale, std::fabs(v));
  }
  double viol = 0;
  if (row.sense != RowSense::GreaterEqual) viol = std::max(viol, activity - row.rhs);
  if (row.sense != RowSense::LessEqual) viol = std::max(viol, row.rhs - activity);
  return viol > tol * scale ? viol / scale : 0.0;
}

struct BoundChange {
  std::size_t column;
  double lower;
  double upper;
};

// One simplex instance plus the bookkeeping for lazy rows and the bounds of
// integral columns currently applied to it.
class Worker {
 public:
  Worker(const LpProblem& problem, const std::vector<DoubleRow>& rows,
         const std::vector<std::size_t>& integral, const MilpConfig& config)
      : problem_(problem),
        rows_(rows),
        integral_(integral),
        config_(config),
        lp_(problem, config.simplex, true),
        added_(problem.row_count(), 0) {
    for (std::size_t i = 0; i < problem.row_count(); ++i)
      if (!problem.rows[i].lazy) added_[i] = 1;
    for (std::size_t col : integral_) {
      const auto& c = problem.columns[col];
      root_lower_.push_back(c.lower->get_d());
      root_upper_.push_back(c.upper->get_d());
    }
    applied_lower_ = root_lower_;
    applied_upper_ = root_upper_;
    slot_.assign(problem.column_count(), -1);
    for (std::size_t k = 0; k < integral_.size(); ++k)
      slot_[integral_[k]] = static_cast<std::ptrdiff_t>(k);
  }

  void apply(const std::vector<BoundChange>& changes) {
    std::vector<double> lo = root_lower_, hi = root_upper_;
    for (const auto& ch : changes) {
      auto k = static_cast<std::size_t>(slot_[ch.column]);
      lo[k] = std::max(lo[k], ch.lower);
      hi[k] = std::min(hi[k], ch.upper);
    }
    for (std::size_t k = 0; k < integral_.size(); ++k) {
      if (lo[k] == applied_lower_[k] && hi[k] == applied_upper_[k]) continue;
      lp_.set_column_bounds(integral_[k], lo[k], hi[k]);
      applied_lower_[k] = lo[k];
      applied_upper_[k] = hi[k];
    }
  }

  // Solves the relaxation under the applied bounds, separating lazy rows
  // until none is violated.
  LpStatus solve() {
    exact_objective_.reset();
    while (true) {
      LpStatus status = lp_.solve();
      if (status == LpStatus::IterationLimit) return solve_exactly();
      if (status != LpStatus::Optimal) return status;
      values_ = lp_.values();
      std::vector<std::pair<double, std::size_t>> violated;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (added_[i]) continue;
        double v = row_violation(rows_[i], values_, config_.feasibility_tol);
        if (v > 0) violated.push_back({-v, i});
      }
      if (violated.empty()) return LpStatus::Optimal;
      std::sort(violated.begin(), violated.end());
      std::size_t take = std::min(violated.size(), std::max<std::size_t>(1, config_.lazy_batch));
      std::vector<std::size_t> chosen;
      for (std::size_t j = 0; j < take; ++j) chosen.push_back(violated[j].second);
      std::sort(chosen.begin(), chosen.end());
      for (std::size_t i : chosen) {
        lp_.add_row(problem_.rows[i]);
        added_[i] = 1;
      }
    }
  }

  const std::vector<double>& values() const { return values_; }
  double objective() const { return exact_objective_ ? *exact_objective_ : lp_.objective(); }
  std::size_t iterations() const { return lp_.iterations(); }
  Basis basis() const { return lp_.basis(); }
  void set_basis(const Basis& basis) { lp_.set_basis(basis); }

 private:
  // The floating simplex stalled, typically on a badly scaled basis. Solve
  // this node in rational arithmetic with every row present, then restart
  // the floating simplex from the slack basis.
  LpStatus solve_exactly() {
    LpProblem node = problem_;
    for (std::size_t k = 0; k < integral_.size(); ++k) {
      auto& col = node.columns[integral_[k]];
      col.lower = Rational(applied_lower_[k]);
      col.upper = Rational(applied_upper_[k]);
    }
    ExactLpResult r = solve_lp_exact(node, config_.simplex);
    lp_.reset_to_slack_basis();
    ++exact_fallbacks_;
    if (r.status != LpStatus::Optimal) return r.status;
    values_ = to_doubles(r.values);
    exact_objective_ = r.objective.get_d();
    return LpStatus::Optimal;
  }

 public:
  std::size_t exact_fallbacks() const { return exact_fallbacks_; }

 private:
  const LpProblem& problem_;
  const std::vector<DoubleRow>& rows_;
  const std::vector<std::size_t>& integral_;
  const MilpConfig& config_;
  BoundedSimplex<double> lp_;
  std::vector<char> added_;
  std::vector<double> root_lower_, root_upper_;
  std::vector<double> applied_lower_, applied_upper_;
  std::vector<std::ptrdiff_t> slot_;
  std::vector<double> values_;
  std::optional<double> exact_objective_;
  std::size_t exact_fallbacks_ = 0;
};

struct Node {
  std::size_t id;
  std::size_t parent;
  std::size_t depth;
  double bound;  // minimization sense
  std::vector<BoundChange> changes;
  std::shared_ptr<const Basis> basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    // priority_queue pops the largest element; "larger" here means worse.
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

constexpr std::size_t kNoNode = static_cast<std::size_t>(-1);

class Search {
 public:
  Search(const LpProblem& problem, const MilpConfig& config)
      : problem_(problem),
        config_(config),
        sign_(problem.sense == ObjectiveSense::Maximize ? -1.0 : 1.0),
        start_(std::chrono::steady_clock::now()) {
    problem.validate();
    for (std::size_t j = 0; j < problem.column_count(); ++j)
      if (problem.columns[j].integral) integral_.push_back(j);
    for (const auto& row : problem.rows) rows_.push_back(to_double_row(row));
    main_ = std::make_unique<Worker>(problem_, rows_, integral_, config_);
  }

  MilpSolution run() {
    MilpSolution out;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(Node{next_id_++, kNoNode, 0, -INFINITY, {}, nullptr});
    std::size_t last_solved = kNoNode;
    bool stopped = false;
    double stop_bound = INFINITY;

    while (!open.empty()) {
      if (nodes_ >= config_.node_limit) {
        out.status = MilpStatus::BoundExceeded;
        stopped = true;
        break;
      }
      if (elapsed() > config_.time_limit_seconds) {
        out.status = MilpStatus::TimedOut;
        stopped = true;
        break;
      }
      Node node = open.top();
      open.pop();
      if (!can_improve(node.bound)) continue;
      ++nodes_;

      main_->apply(node.changes);
      if (node.basis && last_solved != node.parent) main_->set_basis(*node.basis);
      LpStatus status = main_->solve();
      last_solved = node.id;
      if (status == LpStatus::Infeasible) continue;
      if (status == LpStatus::Unbounded)
        throw Error(ErrorKind::Solver, "relaxation is unbounded");
      if (status == LpStatus::IterationLimit)
        throw Error(ErrorKind::Solver, "simplex iteration limit reached");

      const double value = sign_ * main_->objective();
      if (!can_improve(value)) continue;
      const std::vector<double> x = main_->values();
      node_basis_ = main_->basis();

      std::ptrdiff_t branch = pick_branch(x);
      double split = 0;
      if (branch < 0) {
        const bool accepted = accept_integral(x, value, node.changes);
        last_solved = kNoNode;  // polishing moved the simplex away from this node
        if (accepted) continue;
        // Refused: split the first integral column that is not yet fixed.
        for (std::size_t col : integral_) {
          auto [lo, hi] = node_bounds(node.changes, col);
          if (lo == hi) continue;
          branch = static_cast<std::ptrdiff_t>(col);
          const double v = std::round(x[col]);
          split = v < hi ? v : v - 1;
          break;
        }
        if (branch < 0) continue;
        auto basis = std::make_shared<const Basis>(node_basis_);
        push_children(open, node, static_cast<std::size_t>(branch), split, value, basis);
        continue;
      }
      if (config_.heuristic &&
          (nodes_ == 1 || nodes_ % std::max<std::size_t>(1, config_.heuristic_frequency) == 0))
        run_heuristic(x);
      if (!can_improve(value)) continue;

      auto basis = std::make_shared<const Basis>(node_basis_);
      const auto col = static_cast<std::size_t>(branch);
      push_children(open, node, col, std::floor(x[col]), value, basis);
    }

    if (stopped) {
      stop_bound = incumbent_value_;
      while (!open.empty()) {
        stop_bound = std::min(stop_bound, open.top().bound);
        open.pop();
      }
      // Nodes popped but not yet branched are covered by the incumbent or
      // by their parent bound already in the queue.
    } else {
      out.status = incumbent_.empty() ? MilpStatus::Infeasible : MilpStatus::Optimal;
      stop_bound = incumbent_.empty() ? INFINITY : incumbent_value_;
    }

    out.values = incumbent_;
    out.objective = incumbent_.empty() ? 0.0 : sign_ * incumbent_value_;
    out.best_bound = sign_ * stop_bound;
    out.nodes = nodes_;
    out.rejected = rejected_;
    out.lp_iterations = main_->iterations() + (heuristic_ ? heuristic_->iterations() : 0);
    out.exact_fallbacks = main_->exact_fallbacks() + (heuristic_ ? heuristic_->exact_fallbacks() : 0);
    out.seconds = elapsed();
    return out;
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  bool can_improve(double bound) const {
    if (incumbent_.empty()) return true;
    const double tol = 1e-9 * std::max(1.0, std::fabs(incumbent_value_));
    if (config_.objective_step > 0)
      return bound <= incumbent_value_ - config_.objective_step + 1e-6 * config_.objective_step +
                          tol;
    return bound < incumbent_value_ - tol;
  }

  std::ptrdiff_t pick_branch(const std::vector<double>& x) const {
    std::ptrdiff_t best = -1;
    double best_score = 0;
    for (std::size_t col : integral_) {
      const double f = x[col] - std::floor(x[col]);
      const double score = std::min(f, 1.0 - f);
      if (score <= config_.integrality_tol) continue;
      if (score > best_score) {
        best_score = score;
        best = static_cast<std::ptrdiff_t>(col);
      }
    }
    return best;
  }

  template <typename Queue>
  void push_children(Queue& open, Node& node, std::size_t col, double split, double value,
                     const std::shared_ptr<const Basis>& basis) {
    Node down{next_id_++, node.id, node.depth + 1, value, node.changes, basis};
    down.changes.push_back({col, -INFINITY, split});
    Node up{next_id_++, node.id, node.depth + 1, value, std::move(node.changes), basis};
    up.changes.push_back({col, split + 1, INFINITY});
    open.push(std::move(down));
    open.push(std::move(up));
  }

  std::pair<double, double> node_bounds(const std::vector<BoundChange>& changes,
                                        std::size_t col) const {
    double lo = problem_.columns[col].lower->get_d();
    double hi = problem_.columns[col].upper->get_d();
    for (const auto& ch : changes)
      if (ch.column == col) {
        lo = std::max(lo, ch.lower);
        hi = std::min(hi, ch.upper);
      }
    return {lo, hi};
  }

  // Re-solves with integral columns fixed at their rounded values so the
  // continuous part is consistent with exact integers. Returns false when
  // the certifier refuses the point.
  bool accept_integral(const std::vector<double>& x, double value,
                       const std::vector<BoundChange>& changes) {
    std::vector<BoundChange> fixed = changes;
    for (std::size_t col : integral_) {
      const double r = std::round(x[col]);
      fixed.push_back({col, r, r});
    }
    main_->apply(fixed);
    if (main_->solve() == LpStatus::Optimal)
      return offer(main_->values(), sign_ * main_->objective());
    std::vector<double> rounded = x;
    for (std::size_t col : integral_) rounded[col] = std::round(x[col]);
    return offer(rounded, value);
  }

  void run_heuristic(const std::vector<double>& relaxation) {
    auto proposal = config_.heuristic(relaxation);
    if (!proposal || proposal->size() != problem_.column_count()) return;
    if (!heuristic_) heuristic_ = std::make_unique<Worker>(problem_, rows_, integral_, config_);
    std::vector<BoundChange> fixed;
    for (std::size_t col : integral_) {
      const double r = std::round((*proposal)[col]);
      fixed.push_back({col, r, r});
    }
    heuristic_->apply(fixed);
    if (heuristic_->solve() != LpStatus::Optimal) return;
    offer(heuristic_->values(), sign_ * heuristic_->objective());
  }

  // Returns false only when the certifier refuses the point; points that
  // are merely no better than the incumbent count as handled.
  bool offer(const std::vector<double>& x, double value) {
    for (const auto& row : rows_)
      if (row_violation(row, x, config_.feasibility_tol * 1e3) > 0) return false;
    if (!incumbent_.empty() && value >= incumbent_value_) return true;
    std::vector<double> candidate = x;
    for (std::size_t col : integral_) candidate[col] = std::round(candidate[col]);
    if (config_.certify && !config_.certify(candidate)) {
      ++rejected_;
      return false;
    }
    incumbent_ = std::move(candidate);
    incumbent_value_ = value;
    return true;
  }

  const LpProblem& problem_;
  const MilpConfig& config_;
  double sign_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::size_t> integral_;
  std::vector<DoubleRow> rows_;
  std::unique_ptr<Worker> main_;
  std::unique_ptr<Worker> heuristic_;
  std::vector<double> incumbent_;
  double incumbent_value_ = INFINITY;
  std::size_t nodes_ = 0;
  std::size_t next_id_ = 0;
  std::size_t rejected_ = 0;
  Basis node_basis_;
};

Rational row_scale(const LpRow& row, const std::vector<Rational>& x) {
  Rational scale = abs(row.rhs);
  if (scale < 1) scale = 1;
  for (const auto& t : row.terms) {
    Rational v = abs(t.coefficient * x[t.column]);
    if (v > scale) scale = v;
  }
  return scale;
}

}  // namespace

MilpSolution solve_milp(const LpProblem& problem, const MilpConfig& config) {
  Search search(problem, config);
  return search.run();
}

bool ResidualReport::within_tolerance() const {
  for (const auto& r : rows)
    if (r.flagged) return false;
  for (const auto& c : columns)
    if (c.flagged) return false;
  return true;
}

std::size_t ResidualReport::flagged_rows() const {
  std::size_t count = 0;
  for (const auto& r : rows) count += r.flagged ? 1 : 0;
  return count;
}

ResidualReport check_solution(const LpProblem& problem, const std::vector<double>& values,
                              const CheckOptions& options) {
  std::vector<Rational> exact;
  exact.reserve(values.size());
  const Integer max_den(options.max_denominator);
  for (double v : values) exact.push_back(rationalize(v, max_den));
  return check_solution(problem, exact, options);
}

ResidualReport check_solution(const LpProblem& problem, const std::vector<Rational>& values,
                              const CheckOptions& options) {
  if (values.size() != problem.column_count())
    throw Error(ErrorKind::Internal, "check_solution: value vector has wrong length");
  ResidualReport report;
  report.values = values;
  const Rational feas_tol = Rational(options.feasibility_tol);
  const Rational int_tol = Rational(options.integrality_tol);

  for (std::size_t i = 0; i < problem.row_count(); ++i) {
    const LpRow& row = problem.rows[i];
    Rational activity = 0;
    for (const auto& t : row.terms) activity += t.coefficient * values[t.column];
    Rational violation = 0;
    if (row.sense != RowSense::GreaterEqual && activity > row.rhs) violation = activity - row.rhs;
    if (row.sense != RowSense::LessEqual && activity < row.rhs) violation = row.rhs - activity;
    const bool flagged = violation > feas_tol * row_scale(row, values);
    if (violation > report.max_row_violation) report.max_row_violation = violation;
    report.rows.push_back({i, row.name, activity, violation, flagged});
  }

  for (std::size_t j = 0; j < problem.column_count(); ++j) {
    const LpColumn& col = problem.columns[j];
    const Rational& v = values[j];
    Rational bound_violation = 0;
    if (col.lower && v < *col.lower) bound_violation = *col.lower - v;
    if (col.upper && v > *col.upper) bound_violation = v - *col.upper;
    Rational gap = 0;
    if (col.integral) {
      Integer fl;
      mpz_fdiv_q(fl.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
      Rational frac = v - Rational(fl);
      gap = frac < Rational(1, 2) ? frac : Rational(1) - frac;
    }
    Rational scale = 1;
    if (col.lower && abs(*col.lower) > scale) scale = abs(*col.lower);
    if (col.upper && abs(*col.upper) > scale) scale = abs(*col.upper);
    const bool flagged = bound_violation > feas_tol * scale || gap > int_tol;
    if (bound_violation > report.max_bound_violation) report.max_bound_violation = bound_violation;
    if (gap > report.max_integrality_gap) report.max_integrality_gap = gap;
    report.columns.push_back({j, col.name, v, bound_violation, gap, flagged});
  }
  return report;
}

}  // namespace mindef
