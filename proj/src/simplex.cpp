#include "mindef/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "mindef/error.hpp"

namespace mindef {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::IterationLimit: return "IterationLimit";
  }
  return "Unknown";
}

namespace {

template <typename Real>
constexpr bool kExact = std::is_same_v<Real, Rational>;

template <typename Real>
Real convert(const Rational& value) {
  if constexpr (kExact<Real>) {
    return value;
  } else {
    return value.get_d();
  }
}

template <typename Real>
Real magnitude(const Real& value) {
  if constexpr (kExact<Real>) {
    return abs(value);
  } else {
    return std::fabs(value);
  }
}

template <typename Real>
bool is_exact_zero(const Real& value) {
  if constexpr (kExact<Real>) {
    return sgn(value) == 0;
  } else {
    return value == 0.0;
  }
}

template <typename Real>
Real tolerance(double value) {
  if constexpr (kExact<Real>) {
    (void)value;
    return Real(0);
  } else {
    return value;
  }
}

}  // namespace

template <typename Real>
BoundedSimplex<Real>::BoundedSimplex(const LpProblem& problem, SimplexOptions options,
                                     bool defer_lazy_rows)
    : options_(options), maximize_(problem.sense == ObjectiveSense::Maximize) {
  problem.validate();
  n_ = problem.column_count();
  columns_.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    const LpColumn& col = problem.columns[j];
    Real c = convert<Real>(col.objective);
    cost_.push_back(maximize_ ? Real(-c) : c);
    has_lower_.push_back(col.lower.has_value());
    has_upper_.push_back(col.upper.has_value());
    lower_.push_back(col.lower ? convert<Real>(*col.lower) : Real(0));
    upper_.push_back(col.upper ? convert<Real>(*col.upper) : Real(0));
    status_.push_back(VarStatus::AtLower);
    x_.push_back(Real(0));
    position_.push_back(-1);
    snap_status(j);
  }
  for (const auto& row : problem.rows)
    if (!(defer_lazy_rows && row.lazy)) add_row(row);
  needs_refactor_ = true;
}

template <typename Real>
bool BoundedSimplex<Real>::is_fixed(std::size_t var) const {
  return has_lower_[var] && has_upper_[var] && lower_[var] == upper_[var];
}

template <typename Real>
void BoundedSimplex<Real>::snap_status(std::size_t var) {
  if (status_[var] == VarStatus::Basic) return;
  if (status_[var] == VarStatus::AtLower && !has_lower_[var])
    status_[var] = has_upper_[var] ? VarStatus::AtUpper : VarStatus::Free;
  else if (status_[var] == VarStatus::AtUpper && !has_upper_[var])
    status_[var] = has_lower_[var] ? VarStatus::AtLower : VarStatus::Free;
  else if (status_[var] == VarStatus::Free && (has_lower_[var] || has_upper_[var]))
    status_[var] = has_lower_[var] ? VarStatus::AtLower : VarStatus::AtUpper;
  x_[var] = nonbasic_value(var);
}

template <typename Real>
Real BoundedSimplex<Real>::nonbasic_value(std::size_t var) const {
  switch (status_[var]) {
    case VarStatus::AtLower: return lower_[var];
    case VarStatus::AtUpper: return upper_[var];
    default: return Real(0);
  }
}

template <typename Real>
void BoundedSimplex<Real>::set_column_bounds(std::size_t column, std::optional<Real> lower,
                                             std::optional<Real> upper) {
  has_lower_[column] = lower.has_value();
  has_upper_[column] = upper.has_value();
  lower_[column] = lower ? *lower : Real(0);
  upper_[column] = upper ? *upper : Real(0);
  if (status_[column] != VarStatus::Basic) snap_status(column);
}

template <typename Real>
void BoundedSimplex<Real>::add_row(const LpRow& row) {
  const std::size_t r = m_;
  const std::size_t slack = n_ + r;
  for (const auto& term : row.terms) {
    Real a = convert<Real>(term.coefficient);
    if (!is_exact_zero(a)) columns_[term.column].push_back({r, a});
  }
  rhs_.push_back(convert<Real>(row.rhs));
  cost_.push_back(Real(0));
  switch (row.sense) {
    case RowSense::LessEqual:
      has_lower_.push_back(true);
      has_upper_.push_back(false);
      break;
    case RowSense::GreaterEqual:
      has_lower_.push_back(false);
      has_upper_.push_back(true);
      break;
    case RowSense::Equal:
      has_lower_.push_back(true);
      has_upper_.push_back(true);
      break;
  }
  lower_.push_back(Real(0));
  upper_.push_back(Real(0));
  status_.push_back(VarStatus::Basic);
  position_.push_back(static_cast<std::ptrdiff_t>(r));
  head_.push_back(slack);
  ++m_;

  // Slack value from the current point.
  Real activity = Real(0);
  for (const auto& term : row.terms) activity += convert<Real>(term.coefficient) * x_[term.column];
  x_.push_back(rhs_.back() - activity);

  if (needs_refactor_) {
    for (auto& line : binv_) line.push_back(Real(0));
    binv_.emplace_back(m_, Real(0));
    return;
  }
  // New inverse row: -(row restricted to basic columns) * B^-1, then e_r.
  for (auto& line : binv_) line.push_back(Real(0));
  std::vector<Real> fresh(m_, Real(0));
  for (const auto& term : row.terms) {
    std::ptrdiff_t p = position_[term.column];
    if (p < 0) continue;
    Real a = convert<Real>(term.coefficient);
    if (is_exact_zero(a)) continue;
    const auto& src = binv_[static_cast<std::size_t>(p)];
    for (std::size_t i = 0; i < m_; ++i)
      if (!is_exact_zero(src[i])) fresh[i] -= a * src[i];
  }
  fresh[r] = Real(1);
  binv_.push_back(std::move(fresh));
}

template <typename Real>
void BoundedSimplex<Real>::reset_to_slack_basis() {
  head_.clear();
  for (std::size_t v = 0; v < n_ + m_; ++v) {
    if (v < n_) {
      status_[v] = VarStatus::AtLower;
      position_[v] = -1;
      snap_status(v);
    } else {
      status_[v] = VarStatus::Basic;
      position_[v] = static_cast<std::ptrdiff_t>(v - n_);
      head_.push_back(v);
    }
  }
  needs_refactor_ = true;
}

template <typename Real>
Basis BoundedSimplex<Real>::basis() const {
  return Basis{status_};
}

template <typename Real>
void BoundedSimplex<Real>::set_basis(const Basis& basis) {
  const std::size_t total = n_ + m_;
  std::size_t basic = 0;
  for (std::size_t v = 0; v < total; ++v) {
    status_[v] = v < basis.status.size() ? basis.status[v] : VarStatus::Basic;
    if (status_[v] == VarStatus::Basic) ++basic;
  }
  if (basic != m_) {
    reset_to_slack_basis();
    return;
  }
  head_.clear();
  for (std::size_t v = 0; v < total; ++v) {
    if (status_[v] == VarStatus::Basic) {
      position_[v] = static_cast<std::ptrdiff_t>(head_.size());
      head_.push_back(v);
    } else {
      position_[v] = -1;
      snap_status(v);
    }
  }
  needs_refactor_ = true;
}

template <typename Real>
bool BoundedSimplex<Real>::refactor() {
  // Positions holding structural columns, and the rows whose slack is not
  // basic; B^-1 reduces to inverting the square block between them.
  std::vector<std::size_t> structural_pos;
  std::vector<std::ptrdiff_t> slack_pos_of_row(m_, -1);
  for (std::size_t p = 0; p < m_; ++p) {
    std::size_t v = head_[p];
    if (v < n_)
      structural_pos.push_back(p);
    else
      slack_pos_of_row[v - n_] = static_cast<std::ptrdiff_t>(p);
  }
  std::vector<std::size_t> free_rows;
  std::vector<std::ptrdiff_t> local_row(m_, -1);
  for (std::size_t i = 0; i < m_; ++i)
    if (slack_pos_of_row[i] < 0) {
      local_row[i] = static_cast<std::ptrdiff_t>(free_rows.size());
      free_rows.push_back(i);
    }
  const std::size_t k = structural_pos.size();
  if (free_rows.size() != k) return false;

  // Gauss-Jordan on [A_RK | I].
  std::vector<std::vector<Real>> block(k, std::vector<Real>(k, Real(0)));
  for (std::size_t c = 0; c < k; ++c)
    for (const auto& [row, a] : columns_[head_[structural_pos[c]]])
      if (local_row[row] >= 0) block[static_cast<std::size_t>(local_row[row])][c] = a;
  std::vector<std::vector<Real>> inv(k, std::vector<Real>(k, Real(0)));
  for (std::size_t i = 0; i < k; ++i) inv[i][i] = Real(1);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t best = k;
    Real best_mag = Real(0);
    for (std::size_t r = c; r < k; ++r) {
      Real mag = magnitude(block[r][c]);
      if (mag > best_mag) {
        best_mag = mag;
        best = r;
        if constexpr (kExact<Real>) break;
      }
    }
    if (best == k || best_mag <= tolerance<Real>(1e-12)) return false;
    std::swap(block[best], block[c]);
    std::swap(inv[best], inv[c]);
    Real pivot = block[c][c];
    for (std::size_t j = 0; j < k; ++j) {
      if (!is_exact_zero(block[c][j])) block[c][j] /= pivot;
      if (!is_exact_zero(inv[c][j])) inv[c][j] /= pivot;
    }
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c || is_exact_zero(block[r][c])) continue;
      Real f = block[r][c];
      for (std::size_t j = 0; j < k; ++j) {
        if (!is_exact_zero(block[c][j])) block[r][j] -= f * block[c][j];
        if (!is_exact_zero(inv[c][j])) inv[r][j] -= f * inv[c][j];
      }
    }
  }
  // Row c of inv now maps v_R to the basic value at structural_pos[c].
  binv_.assign(m_, std::vector<Real>(m_, Real(0)));
  for (std::size_t c = 0; c < k; ++c) {
    auto& line = binv_[structural_pos[c]];
    for (std::size_t r = 0; r < k; ++r) line[free_rows[r]] = inv[c][r];
  }
  for (std::size_t i = 0; i < m_; ++i)
    if (slack_pos_of_row[i] >= 0) binv_[static_cast<std::size_t>(slack_pos_of_row[i])][i] = Real(1);
  for (std::size_t c = 0; c < k; ++c) {
    const auto& src = binv_[structural_pos[c]];
    for (const auto& [row, a] : columns_[head_[structural_pos[c]]]) {
      if (slack_pos_of_row[row] < 0) continue;
      auto& dst = binv_[static_cast<std::size_t>(slack_pos_of_row[row])];
      for (std::size_t r : free_rows)
        if (!is_exact_zero(src[r])) dst[r] -= a * src[r];
    }
  }
  needs_refactor_ = false;
  since_refactor_ = 0;
  return true;
}

template <typename Real>
void BoundedSimplex<Real>::compute_basic_values() {
  std::vector<Real> residual = rhs_;
  for (std::size_t v = 0; v < n_ + m_; ++v) {
    if (status_[v] == VarStatus::Basic) continue;
    x_[v] = nonbasic_value(v);
    if (is_exact_zero(x_[v])) continue;
    if (v < n_) {
      for (const auto& [row, a] : columns_[v]) residual[row] -= a * x_[v];
    } else {
      residual[v - n_] -= x_[v];
    }
  }
  for (std::size_t p = 0; p < m_; ++p) {
    Real value = Real(0);
    const auto& line = binv_[p];
    for (std::size_t i = 0; i < m_; ++i)
      if (!is_exact_zero(line[i]) && !is_exact_zero(residual[i])) value += line[i] * residual[i];
    x_[head_[p]] = value;
  }
}

template <typename Real>
LpStatus BoundedSimplex<Real>::solve() {
  const Real ptol = tolerance<Real>(options_.primal_tol);
  const Real dtol = tolerance<Real>(options_.dual_tol);
  const Real pivtol = tolerance<Real>(options_.pivot_tol);
  const std::size_t limit = options_.iteration_limit != 0
                                ? options_.iteration_limit
                                : 50 * (n_ + 2 * m_) + 10000;

  if (needs_refactor_) {
    if (!refactor()) {
      reset_to_slack_basis();
      if (!refactor()) throw Error(ErrorKind::Solver, "slack basis failed to factor");
    }
  }
  compute_basic_values();

  std::size_t degenerate_run = 0;  // pivots since the phase objective last improved
  Real best_measure = Real(0);
  bool started = false, last_phase1 = false, sticky_bland = false;
  std::size_t reentries = 0;  // returns from phase 2 to phase 1
  std::size_t iterations = 0;
  std::vector<Real> y(m_), alpha(m_);
  std::vector<Real> basic_cost(m_);

  while (true) {
    if (iterations >= limit) {
      total_iterations_ += iterations;
      return LpStatus::IterationLimit;
    }
    if constexpr (!kExact<Real>) {
      if (since_refactor_ >= options_.refactor_interval) {
        if (!refactor()) {
          reset_to_slack_basis();
          if (!refactor()) throw Error(ErrorKind::Solver, "slack basis failed to factor");
        }
        compute_basic_values();
      }
    }

    // Phase selection: any bound violation among basic variables puts us in
    // phase 1 with the violation sum as objective.
    bool phase1 = false;
    for (std::size_t p = 0; p < m_; ++p) {
      std::size_t v = head_[p];
      basic_cost[p] = Real(0);
      if (has_lower_[v] && x_[v] < lower_[v] - ptol) {
        basic_cost[p] = Real(-1);
        phase1 = true;
      } else if (has_upper_[v] && x_[v] > upper_[v] + ptol) {
        basic_cost[p] = Real(1);
        phase1 = true;
      }
    }
    if (!phase1)
      for (std::size_t p = 0; p < m_; ++p) basic_cost[p] = cost_[head_[p]];

    // Progress of the current phase objective. Pivots that leave it unchanged
    // count toward the switch to Bland's rule, whether or not they moved x.
    Real measure = Real(0);
    if (phase1) {
      for (std::size_t p = 0; p < m_; ++p) {
        const std::size_t v = head_[p];
        if (basic_cost[p] < Real(0)) measure += lower_[v] - x_[v];
        if (basic_cost[p] > Real(0)) measure += x_[v] - upper_[v];
      }
    } else {
      for (std::size_t v = 0; v < n_; ++v)
        if (!is_exact_zero(cost_[v])) measure += cost_[v] * x_[v];
    }
    // Compared against the best value seen since the phase was entered, since
    // tolerance-driven pivots can trade tiny increases for tiny decreases
    // indefinitely. Falling back into phase 1 over and over is the same kind
    // of stall, and switches to Bland's rule for the rest of the solve.
    if (phase1 && started && !last_phase1 && ++reentries >= options_.degenerate_before_bland)
      sticky_bland = true;
    bool progressed;
    if (!started || phase1 != last_phase1) {
      progressed = true;
    } else if constexpr (kExact<Real>) {
      progressed = measure < best_measure;
    } else {
      progressed = measure < best_measure - 1e-11 * (1 + std::fabs(best_measure));
    }
    started = true;
    last_phase1 = phase1;
    if (progressed) {
      best_measure = measure;
      degenerate_run = 0;
    } else {
      ++degenerate_run;
    }
    if (!kExact<Real> && options_.stall_limit != 0 && degenerate_run >= options_.stall_limit) {
      total_iterations_ += iterations;
      return LpStatus::IterationLimit;
    }

    std::fill(y.begin(), y.end(), Real(0));
    for (std::size_t p = 0; p < m_; ++p) {
      if (is_exact_zero(basic_cost[p])) continue;
      const auto& line = binv_[p];
      for (std::size_t i = 0; i < m_; ++i)
        if (!is_exact_zero(line[i])) y[i] += basic_cost[p] * line[i];
    }

    const bool bland = sticky_bland || degenerate_run >= options_.degenerate_before_bland;
    std::ptrdiff_t entering = -1;
    int direction = 0;
    Real best_score = Real(0);
    for (std::size_t v = 0; v < n_ + m_; ++v) {
      if (status_[v] == VarStatus::Basic || is_fixed(v)) continue;
      Real d = phase1 ? Real(0) : cost_[v];
      if (v < n_) {
        for (const auto& [row, a] : columns_[v])
          if (!is_exact_zero(y[row])) d -= y[row] * a;
      } else {
        d -= y[v - n_];
      }
      int dir = 0;
      Real score = Real(0);
      const VarStatus st = status_[v];
      if ((st == VarStatus::AtLower || st == VarStatus::Free) && d < -dtol) {
        dir = 1;
        score = -d;
      } else if ((st == VarStatus::AtUpper || st == VarStatus::Free) && d > dtol) {
        dir = -1;
        score = d;
      }
      if (dir == 0) continue;
      if (bland) {
        entering = static_cast<std::ptrdiff_t>(v);
        direction = dir;
        break;
      }
      if (entering < 0 || score > best_score) {
        entering = static_cast<std::ptrdiff_t>(v);
        direction = dir;
        best_score = score;
      }
    }
    if (entering < 0) {
      total_iterations_ += iterations;
      return phase1 ? LpStatus::Infeasible : LpStatus::Optimal;
    }
    const std::size_t q = static_cast<std::size_t>(entering);

    // alpha = B^-1 a_q
    std::fill(alpha.begin(), alpha.end(), Real(0));
    if (q < n_) {
      for (const auto& [row, a] : columns_[q])
        for (std::size_t p = 0; p < m_; ++p)
          if (!is_exact_zero(binv_[p][row])) alpha[p] += binv_[p][row] * a;
    } else {
      for (std::size_t p = 0; p < m_; ++p) alpha[p] = binv_[p][q - n_];
    }

    // Ratio test, first breakpoint; two passes (Harris) in floating point.
    struct Candidate {
      std::size_t position;
      Real ratio;
      Real bound;
    };
    std::vector<Candidate> candidates;
    Real relaxed_min = Real(0);
    bool have_relaxed = false;
    for (std::size_t p = 0; p < m_; ++p) {
      if (magnitude(alpha[p]) <= pivtol) continue;
      const std::size_t v = head_[p];
      const Real rate = direction > 0 ? Real(-alpha[p]) : alpha[p];
      Real bound;
      bool has_bound = false;
      if (rate > Real(0)) {
        if (has_lower_[v] && x_[v] < lower_[v] - ptol) {
          bound = lower_[v];
          has_bound = true;
        } else if (has_upper_[v] && !(x_[v] > upper_[v] + ptol)) {
          bound = upper_[v];
          has_bound = true;
        }
      } else {
        if (has_upper_[v] && x_[v] > upper_[v] + ptol) {
          bound = upper_[v];
          has_bound = true;
        } else if (has_lower_[v] && !(x_[v] < lower_[v] - ptol)) {
          bound = lower_[v];
          has_bound = true;
        }
      }
      if (!has_bound) continue;
      Real rate_mag = magnitude(rate);
      Real distance = rate > Real(0) ? Real(bound - x_[v]) : Real(x_[v] - bound);
      if (distance < Real(0)) distance = Real(0);
      Real ratio = distance / rate_mag;
      Real relaxed = (distance + ptol) / rate_mag;
      if (!have_relaxed || relaxed < relaxed_min) {
        relaxed_min = relaxed;
        have_relaxed = true;
      }
      candidates.push_back({p, ratio, bound});
    }

    std::ptrdiff_t leave = -1;
    Real step = Real(0);
    Real leave_bound = Real(0);
    if (have_relaxed) {
      // Bland's rule needs the textbook ratio test: only the minimum ratio
      // (ties broken by index) may leave.
      Real limit_ratio = relaxed_min;
      if (bland) {
        limit_ratio = candidates.front().ratio;
        for (const auto& cand : candidates) limit_ratio = std::min(limit_ratio, cand.ratio);
      }
      for (const auto& cand : candidates) {
        if (cand.ratio > limit_ratio) continue;
        if (leave < 0) {
          leave = static_cast<std::ptrdiff_t>(cand.position);
          step = cand.ratio;
          leave_bound = cand.bound;
          continue;
        }
        const std::size_t cur = static_cast<std::size_t>(leave);
        bool better;
        if (bland) {
          better = head_[cand.position] < head_[cur];
        } else {
          Real a = magnitude(alpha[cand.position]);
          Real b = magnitude(alpha[cur]);
          better = a > b || (a == b && head_[cand.position] < head_[cur]);
        }
        if (better) {
          leave = static_cast<std::ptrdiff_t>(cand.position);
          step = cand.ratio;
          leave_bound = cand.bound;
        }
      }
    }

    bool flip = false;
    if (has_lower_[q] && has_upper_[q]) {
      Real range = upper_[q] - lower_[q];
      if (leave < 0 || range <= step) {
        flip = true;
        step = range;
      }
    }
    if (leave < 0 && !flip) {
      total_iterations_ += iterations;
      if (phase1) throw Error(ErrorKind::Solver, "phase 1 found an unbounded direction");
      return LpStatus::Unbounded;
    }

    ++iterations;
    ++since_refactor_;

    // Move along the edge.
    if (!is_exact_zero(step)) {
      Real signed_step = direction > 0 ? step : Real(-step);
      x_[q] += signed_step;
      for (std::size_t p = 0; p < m_; ++p)
        if (!is_exact_zero(alpha[p])) x_[head_[p]] -= alpha[p] * signed_step;
    }

    if (flip) {
      status_[q] = direction > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
      x_[q] = nonbasic_value(q);
      continue;
    }

    const std::size_t r = static_cast<std::size_t>(leave);
    const std::size_t leaving = head_[r];
    x_[leaving] = leave_bound;
    if (has_lower_[leaving] && has_upper_[leaving] && lower_[leaving] == upper_[leaving])
      status_[leaving] = VarStatus::AtLower;
    else if (has_lower_[leaving] && leave_bound == lower_[leaving])
      status_[leaving] = VarStatus::AtLower;
    else
      status_[leaving] = VarStatus::AtUpper;
    position_[leaving] = -1;
    status_[q] = VarStatus::Basic;
    position_[q] = static_cast<std::ptrdiff_t>(r);
    head_[r] = q;

    // Eta update of the dense inverse.
    const Real pivot = alpha[r];
    auto& pivot_line = binv_[r];
    for (std::size_t i = 0; i < m_; ++i)
      if (!is_exact_zero(pivot_line[i])) pivot_line[i] /= pivot;
    for (std::size_t p = 0; p < m_; ++p) {
      if (p == r || is_exact_zero(alpha[p])) continue;
      const Real f = alpha[p];
      auto& line = binv_[p];
      for (std::size_t i = 0; i < m_; ++i)
        if (!is_exact_zero(pivot_line[i])) line[i] -= f * pivot_line[i];
    }
  }
}

template <typename Real>
std::vector<Real> BoundedSimplex<Real>::values() const {
  return std::vector<Real>(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
}

template <typename Real>
Real BoundedSimplex<Real>::objective() const {
  Real total = Real(0);
  for (std::size_t j = 0; j < n_; ++j)
    if (!is_exact_zero(cost_[j])) total += cost_[j] * x_[j];
  return maximize_ ? Real(-total) : total;
}

template class BoundedSimplex<double>;
template class BoundedSimplex<Rational>;

LpResult solve_lp(const LpProblem& problem, const SimplexOptions& options) {
  BoundedSimplex<double> simplex(problem, options);
  LpResult result;
  result.status = simplex.solve();
  result.iterations = simplex.iterations();
  if (result.status == LpStatus::Optimal) {
    result.values = simplex.values();
    result.objective = simplex.objective();
  }
  return result;
}

ExactLpResult solve_lp_exact(const LpProblem& problem, const SimplexOptions& options) {
  BoundedSimplex<Rational> simplex(problem, options);
  ExactLpResult result;
  result.status = simplex.solve();
  result.iterations = simplex.iterations();
  if (result.status == LpStatus::Optimal) {
    result.values = simplex.values();
    result.objective = simplex.objective();
  }
  return result;
}

}  // namespace mindef
