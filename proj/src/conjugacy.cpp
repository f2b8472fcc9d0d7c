#include "mindef/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mindef/dynamics.hpp"
#include "mindef/error.hpp"
#include "mindef/mps.hpp"
#include "mindef/structure.hpp"

namespace mindef {

namespace {

std::string idx(std::size_t i) { return std::to_string(i + 1); }

LpTerm term(std::size_t column, const Rational& coefficient) { return LpTerm{column, coefficient}; }

}  // namespace

ProblemSpec make_problem_spec(const Network& source, const std::vector<Complex>& extra,
                              Rational eps) {
  ProblemSpec spec{source, source.complexes(), std::move(eps), std::nullopt};
  for (const auto& c : extra)
    if (std::find(spec.candidates.begin(), spec.candidates.end(), c) == spec.candidates.end())
      spec.candidates.push_back(c);
  return spec;
}

std::size_t ConjugacyMilp::ab(std::size_t i, std::size_t j) const {
  return i * (m - 1) + (j < i ? j : j - 1);
}
std::size_t ConjugacyMilp::u(std::size_t r) const { return m * (m - 1) + r; }
std::size_t ConjugacyMilp::phi(std::size_t i, std::size_t j) const {
  return m * (m - 1) + n + ab(i, j);
}
std::size_t ConjugacyMilp::g(std::size_t i, std::size_t k) const {
  return 2 * m * (m - 1) + n + i * partitions + k;
}
std::size_t ConjugacyMilp::t(std::size_t k) const {
  return 2 * m * (m - 1) + n + m * partitions + k;
}

std::size_t ConjugacyMilp::binary_count() const { return problem.integral_count(); }
std::size_t ConjugacyMilp::continuous_count() const {
  return problem.column_count() - problem.integral_count();
}

ConjugacyMilp assemble(const ProblemSpec& spec) {
  if (spec.eps <= 0 || spec.eps >= 1)
    throw Error(ErrorKind::InvalidNetwork, "eps must lie strictly between 0 and 1");
  if (spec.big_m && *spec.big_m <= 0)
    throw Error(ErrorKind::InvalidNetwork, "big-M must be positive");
  const Network& source = spec.source;
  ConjugacyMilp milp{spec, {}};
  milp.n = source.species_count();
  milp.m = spec.candidates.size();
  const std::size_t n = milp.n, m = milp.m;

  for (std::size_t j = 0; j < m; ++j) {
    const Complex& c = spec.candidates[j];
    if (c.size() != n || std::any_of(c.begin(), c.end(), [](int v) { return v < 0; }))
      throw Error(ErrorKind::InvalidNetwork, "candidate complex " + idx(j) + " is malformed");
    for (std::size_t l = 0; l < j; ++l)
      if (spec.candidates[l] == c)
        throw Error(ErrorKind::DuplicateComplex,
                    "candidate complex " + format_complex(c, source.species()) + " repeats");
  }

  milp.y = Matrix(n, m);
  milp.coefficients = Matrix(n, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t r = 0; r < n; ++r) milp.y(r, j) = spec.candidates[j][r];
  for (const auto& [monomial, column] : coefficient_map(source)) {
    auto it = std::find(spec.candidates.begin(), spec.candidates.end(), monomial);
    if (it == spec.candidates.end())
      throw Error(ErrorKind::RankFailure, "source monomial " +
                                              format_complex(monomial, source.species()) +
                                              " is not among the candidate complexes");
    const auto j = static_cast<std::size_t>(it - spec.candidates.begin());
    for (std::size_t r = 0; r < n; ++r) milp.coefficients(r, j) = column[r];
  }
  milp.s = rank(milp.coefficients);
  if (m <= milp.s)
    throw Error(ErrorKind::DegenerateProblem,
                "no partition slots: " + std::to_string(m) + " candidate complexes, rank " +
                    std::to_string(milp.s));
  milp.partitions = m - milp.s;
  const std::size_t P = milp.partitions;

  const Rational eps = spec.eps;
  const Rational inv_eps = Rational(1) / eps;
  const Rational big = spec.effective_big_m();
  LpProblem& p = milp.problem;
  p.name = "mindef";

  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) p.add_column({"ab_" + idx(i) + "_" + idx(j), Rational(0), inv_eps, 0, false});
  for (std::size_t r = 0; r < n; ++r) p.add_column({"u_" + idx(r), eps, inv_eps, 0, false});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) p.add_column({"phi_" + idx(i) + "_" + idx(j), Rational(0), std::nullopt, 0, false});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < P; ++k)
      p.add_column({"g_" + idx(i) + "_" + idx(k), Rational(0), Rational(1), 0, true});
  for (std::size_t k = 0; k < P; ++k)
    p.add_column({"t_" + idx(k), Rational(0), Rational(1), Rational(-1), false});

  // Linear conjugacy: (Y A_b)_rj = u_r M_rj with the diagonal of A_b
  // replaced by minus its column sum.
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < m; ++j) {
      LpRow row{"lc_" + idx(r) + "_" + idx(j), {}, RowSense::Equal, Rational(0), false};
      for (std::size_t i = 0; i < m; ++i) {
        if (i == j) continue;
        Rational a = milp.y(r, i) - milp.y(r, j);
        if (!is_zero(a)) row.terms.push_back(term(milp.ab(i, j), a));
      }
      if (!is_zero(milp.coefficients(r, j)))
        row.terms.push_back(term(milp.u(r), -milp.coefficients(r, j)));
      if (!row.terms.empty()) p.add_row(std::move(row));
    }

  // Partition assignment.
  for (std::size_t i = 0; i < m; ++i) {
    LpRow row{"cp_one_" + idx(i), {}, RowSense::Equal, Rational(1), false};
    for (std::size_t k = 0; k < P; ++k) row.terms.push_back(term(milp.g(i, k), 1));
    p.add_row(std::move(row));
  }
  for (std::size_t k = 0; k < P; ++k) {
    LpRow lo{"cp_lo_" + idx(k), {}, RowSense::GreaterEqual, Rational(0), false};
    LpRow hi{"cp_hi_" + idx(k), {}, RowSense::LessEqual, Rational(0), false};
    for (std::size_t i = 0; i < m; ++i) {
      lo.terms.push_back(term(milp.g(i, k), 1));
      hi.terms.push_back(term(milp.g(i, k), 1));
    }
    lo.terms.push_back(term(milp.t(k), -eps));
    hi.terms.push_back(term(milp.t(k), -inv_eps));
    p.add_row(std::move(lo));
    p.add_row(std::move(hi));
  }

  // Kernel certificate: Phi is a circulation on the support of A_b that
  // never crosses partitions.
  for (std::size_t i = 0; i < m; ++i) {
    LpRow row{"ker_bal_" + idx(i), {}, RowSense::Equal, Rational(0), false};
    for (std::size_t l = 0; l < m; ++l) {
      if (l == i) continue;
      row.terms.push_back(term(milp.phi(i, l), 1));
      row.terms.push_back(term(milp.phi(l, i), -1));
    }
    p.add_row(std::move(row));
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      p.add_row({"ker_lo_" + idx(i) + "_" + idx(j),
                 {term(milp.phi(i, j), 1), term(milp.ab(i, j), -eps)},
                 RowSense::GreaterEqual, Rational(0), false});
      p.add_row({"ker_hi_" + idx(i) + "_" + idx(j),
                 {term(milp.phi(i, j), 1), term(milp.ab(i, j), -big)},
                 RowSense::LessEqual, Rational(0), false});
    }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      for (std::size_t k = 0; k < P; ++k)
        p.add_row({"ker_sep_" + idx(i) + "_" + idx(j) + "_" + idx(k),
                   {term(milp.phi(i, j), 1), term(milp.g(i, k), -big), term(milp.g(j, k), big)},
                   RowSense::LessEqual, big, true});
    }

  // Canonical labeling: complex i may sit in a partition past k only if
  // some earlier complex occupies k.
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k <= std::min(i, P - 1); ++k) {
      if (k + 1 >= P) continue;
      LpRow row{"uniq_" + idx(i) + "_" + idx(k), {}, RowSense::GreaterEqual, Rational(0), false};
      for (std::size_t j = 0; j < i; ++j) row.terms.push_back(term(milp.g(j, k), 1));
      for (std::size_t l = k + 1; l < P; ++l) row.terms.push_back(term(milp.g(i, l), -1));
      p.add_row(std::move(row));
    }

  p.validate();
  if (milp.binary_count() != m * P || milp.continuous_count() != m * (2 * m - 1) + n - milp.s)
    throw Error(ErrorKind::Internal, "variable counts disagree with the model layout");
  return milp;
}

std::optional<std::vector<double>> structure_rounding(const ConjugacyMilp& milp,
                                                      const std::vector<double>& values) {
  const std::size_t m = milp.m;
  const double threshold = milp.spec.eps.get_d() / 2;
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && values[milp.ab(i, j)] > threshold) {
        std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  std::vector<std::ptrdiff_t> label(m, -1);
  std::size_t next = 0;
  std::vector<double> out = values;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t root = find(i);
    if (label[root] < 0) label[root] = static_cast<std::ptrdiff_t>(next++);
    if (next > milp.partitions) return std::nullopt;
    for (std::size_t k = 0; k < milp.partitions; ++k)
      out[milp.g(i, k)] = static_cast<std::size_t>(label[root]) == k ? 1.0 : 0.0;
  }
  return out;
}

namespace {

// Exact linear program for A_b, u and Phi with the partition fixed: only
// pairs inside one partition may carry a rate. With `normalize` the
// objective picks u closest to 1 in the l1 sense.
struct FitModel {
  LpProblem lp;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (i, j): j -> i
  std::vector<std::size_t> ab_col, u_col, d_col;
};

struct ExactFit : FitModel {
  ExactLpResult result;
};

FitModel fit_model(const ConjugacyMilp& milp, const std::vector<std::size_t>& partition,
                   const std::vector<double>* support, bool normalize) {
  const std::size_t n = milp.n, m = milp.m;
  const Rational eps = milp.spec.eps;
  const Rational inv_eps = Rational(1) / eps;
  const Rational big = milp.spec.effective_big_m();
  const double threshold = eps.get_d() / 2;
  FitModel fit;
  LpProblem& lp = fit.lp;
  lp.name = "fit";
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j || partition[i] != partition[j]) continue;
      if (support && !((*support)[milp.ab(i, j)] > threshold)) continue;
      fit.pairs.push_back({i, j});
    }
  const auto& pairs = fit.pairs;
  for (auto [i, j] : pairs)
    fit.ab_col.push_back(
        lp.add_column({"ab_" + idx(i) + "_" + idx(j), Rational(0), inv_eps, 0, false}));
  for (std::size_t r = 0; r < n; ++r)
    fit.u_col.push_back(lp.add_column({"u_" + idx(r), eps, inv_eps, 0, false}));
  std::vector<std::size_t> phi_col;
  auto& d_col = fit.d_col;
  for (auto [i, j] : pairs)
    phi_col.push_back(
        lp.add_column({"phi_" + idx(i) + "_" + idx(j), Rational(0), std::nullopt, 0, false}));
  if (normalize)
    for (std::size_t r = 0; r < n; ++r)
      d_col.push_back(lp.add_column({"d_" + idx(r), Rational(0), std::nullopt, Rational(1), false}));

  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < m; ++j) {
      LpRow row{"lc", {}, RowSense::Equal, Rational(0), false};
      for (std::size_t e = 0; e < pairs.size(); ++e) {
        if (pairs[e].second != j) continue;
        Rational a = milp.y(r, pairs[e].first) - milp.y(r, j);
        if (!is_zero(a)) row.terms.push_back(term(fit.ab_col[e], a));
      }
      if (!is_zero(milp.coefficients(r, j)))
        row.terms.push_back(term(fit.u_col[r], -milp.coefficients(r, j)));
      if (!row.terms.empty()) lp.add_row(std::move(row));
    }
  for (std::size_t i = 0; i < m; ++i) {
    LpRow row{"bal", {}, RowSense::Equal, Rational(0), false};
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      if (pairs[e].first == i) row.terms.push_back(term(phi_col[e], 1));
      if (pairs[e].second == i) row.terms.push_back(term(phi_col[e], -1));
    }
    if (!row.terms.empty()) lp.add_row(std::move(row));
  }
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    lp.add_row({"lo", {term(phi_col[e], 1), term(fit.ab_col[e], -eps)}, RowSense::GreaterEqual, 0, false});
    lp.add_row({"hi", {term(phi_col[e], 1), term(fit.ab_col[e], -big)}, RowSense::LessEqual, 0, false});
  }
  for (std::size_t r = 0; r < d_col.size(); ++r) {
    lp.add_row({"dplus", {term(d_col[r], 1), term(fit.u_col[r], -1)}, RowSense::GreaterEqual, -1, false});
    lp.add_row({"dminus", {term(d_col[r], 1), term(fit.u_col[r], 1)}, RowSense::GreaterEqual, 1, false});
  }
  return fit;
}

ExactFit exact_fit(const ConjugacyMilp& milp, const std::vector<std::size_t>& partition,
                   const std::vector<double>* support, bool normalize) {
  ExactFit fit{fit_model(milp, partition, support, normalize), {}};
  fit.result = solve_lp_exact(fit.lp);
  if (!normalize || fit.result.status != LpStatus::Optimal) return fit;

  // Second stage: keep the distance of u from 1 optimal and stay as close as
  // possible to the source's own rates, so an already optimal source comes
  // back unchanged.
  LpProblem& lp = fit.lp;
  LpRow keep{"keep", {}, RowSense::LessEqual, fit.result.objective, false};
  for (std::size_t c : fit.d_col) {
    keep.terms.push_back(term(c, 1));
    lp.columns[c].objective = 0;
  }
  lp.add_row(std::move(keep));
  const Network& source = milp.spec.source;
  std::vector<std::optional<std::size_t>> in_source(milp.m);
  for (std::size_t j = 0; j < milp.m; ++j) in_source[j] = source.find_complex(milp.spec.candidates[j]);
  for (std::size_t e = 0; e < fit.pairs.size(); ++e) {
    auto [i, j] = fit.pairs[e];
    Rational ref = in_source[i] && in_source[j] ? source.rate(*in_source[j], *in_source[i]) : Rational(0);
    std::size_t dev = lp.add_column({"e_" + idx(i) + "_" + idx(j), Rational(0), std::nullopt, Rational(1), false});
    lp.add_row({"eplus", {term(dev, 1), term(fit.ab_col[e], -1)}, RowSense::GreaterEqual, -ref, false});
    lp.add_row({"eminus", {term(dev, 1), term(fit.ab_col[e], 1)}, RowSense::GreaterEqual, ref, false});
  }
  ExactLpResult second = solve_lp_exact(lp);
  if (second.status == LpStatus::Optimal) fit.result = std::move(second);
  return fit;
}

bool float_fit_feasible(const ConjugacyMilp& milp, const std::vector<std::size_t>& partition) {
  return solve_lp(fit_model(milp, partition, nullptr, true).lp).status == LpStatus::Optimal;
}

// Relabels blocks by first appearance, as the uniqueness rows require.
std::vector<std::size_t> canonical_labels(const std::vector<std::size_t>& partition) {
  std::vector<std::size_t> out(partition.size());
  std::vector<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    auto it = std::find_if(seen.begin(), seen.end(),
                           [&](const auto& p) { return p.first == partition[i]; });
    if (it == seen.end()) {
      seen.push_back({partition[i], seen.size()});
      out[i] = seen.size() - 1;
    } else {
      out[i] = it->second;
    }
  }
  return out;
}

std::size_t block_count(const std::vector<std::size_t>& partition) {
  return partition.empty() ? 0 : *std::max_element(partition.begin(), partition.end()) + 1;
}

// Greedy refinement: detach single complexes, then split blocks in two,
// keeping every step feasible. Any refinement of the final partition of an
// optimal solution stays feasible, so an optimum is always reachable by
// some sequence of these moves.
std::vector<std::size_t> refine(const ConjugacyMilp& milp, std::vector<std::size_t> partition,
                                std::size_t max_split_block) {
  auto try_accept = [&](std::vector<std::size_t> candidate) {
    candidate = canonical_labels(candidate);
    if (block_count(candidate) > milp.partitions) return false;
    if (!float_fit_feasible(milp, candidate)) return false;
    partition = std::move(candidate);
    return true;
  };
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < milp.m && !improved; ++i) {
      const auto size = std::count(partition.begin(), partition.end(), partition[i]);
      if (size < 2) continue;
      auto candidate = partition;
      candidate[i] = block_count(partition);
      improved = try_accept(candidate);
    }
    if (improved) continue;
    for (std::size_t b = 0; b < block_count(partition) && !improved; ++b) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < milp.m; ++i)
        if (partition[i] == b) members.push_back(i);
      if (members.size() < 4 || members.size() > max_split_block) continue;
      // Subsets containing the first member, each split tried once; sizes
      // below two were covered by the single-complex moves.
      const std::size_t rest = members.size() - 1;
      for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << rest) && !improved; ++mask) {
        const auto moved = static_cast<std::size_t>(__builtin_popcountll(mask));
        if (moved < 2 || moved > rest - 1) continue;
        auto candidate = partition;
        for (std::size_t q = 0; q < rest; ++q)
          if ((mask >> q) & 1) candidate[members[q + 1]] = block_count(partition);
        improved = try_accept(candidate);
      }
    }
  }
  return partition;
}

std::vector<double> with_partition(const ConjugacyMilp& milp, std::vector<double> values,
                                   const std::vector<std::size_t>& partition) {
  for (std::size_t i = 0; i < milp.m; ++i)
    for (std::size_t k = 0; k < milp.partitions; ++k)
      values[milp.g(i, k)] = partition[i] == k ? 1.0 : 0.0;
  return values;
}

// Partition slot of each complex from rounded g values; slot P marks a
// complex without one.
std::vector<std::size_t> read_partition(const ConjugacyMilp& milp, const std::vector<double>& values) {
  std::vector<std::size_t> partition(milp.m, milp.partitions);
  for (std::size_t i = 0; i < milp.m; ++i)
    for (std::size_t k = 0; k < milp.partitions; ++k)
      if (std::round(values[milp.g(i, k)]) == 1) partition[i] = k;
  return partition;
}

}  // namespace

std::optional<std::vector<double>> partition_search(const ConjugacyMilp& milp,
                                                    const std::vector<double>& values) {
  std::vector<std::size_t> start(milp.m, 0);
  if (auto rounded = structure_rounding(milp, values)) {
    auto blocks = read_partition(milp, *rounded);
    if (float_fit_feasible(milp, blocks)) start = blocks;
  }
  if (block_count(start) == 1 && !float_fit_feasible(milp, start)) return std::nullopt;
  return with_partition(milp, values, refine(milp, start, 12));
}

MilpConfig solver_config(const ConjugacyMilp& milp, MilpConfig base) {
  base.objective_step = 1;
  base.heuristic = [&milp](const std::vector<double>& x) { return partition_search(milp, x); };
  base.certify = [&milp](const std::vector<double>& x) {
    return partition_admits_realization(milp, x);
  };
  return base;
}

bool partition_admits_realization(const ConjugacyMilp& milp, const std::vector<double>& values) {
  const auto partition = read_partition(milp, values);
  if (std::count(partition.begin(), partition.end(), milp.partitions) != 0) return false;
  return exact_fit(milp, partition, nullptr, false).result.status == LpStatus::Optimal;
}

ConjugateRealization recover(const ConjugacyMilp& milp, const std::vector<double>& values,
                             const RecoverOptions& options) {
  const std::size_t n = milp.n, m = milp.m, P = milp.partitions;
  if (values.size() != milp.problem.column_count())
    throw Error(ErrorKind::Internal, "solution length does not match the model");
  const ResidualReport check = check_solution(milp.problem, values);
  if (check.max_integrality_gap > Rational(1, 1000))
    throw Error(ErrorKind::VerificationFailure, "partition variables are not integral");

  ConjugateRealization out{milp.spec.source, {}, read_partition(milp, values), 0, 0, 0};
  for (std::size_t i = 0; i < m; ++i)
    if (out.partition[i] == P)
      throw Error(ErrorKind::VerificationFailure, "complex " + idx(i) + " has no partition");
  for (std::size_t k = 0; k < P; ++k) out.theta_sum += check.values[milp.t(k)];
  {
    std::vector<char> used(P, 0);
    for (std::size_t k : out.partition) used[k] = 1;
    out.nonempty_partitions = static_cast<std::size_t>(std::count(used.begin(), used.end(), 1));
  }

  const ExactFit fit =
      exact_fit(milp, out.partition, options.normalize ? nullptr : &values, options.normalize);
  if (fit.result.status != LpStatus::Optimal)
    throw Error(ErrorKind::VerificationFailure,
                std::string("exact re-solve at the fixed partition returned ") +
                    to_string(fit.result.status));

  for (std::size_t r = 0; r < n; ++r) out.c.push_back(Rational(1) / fit.result.values[fit.u_col[r]]);
  std::vector<Reaction> reactions;
  for (std::size_t e = 0; e < fit.pairs.size(); ++e) {
    const Rational& a = fit.result.values[fit.ab_col[e]];
    if (is_zero(a)) continue;
    auto [i, j] = fit.pairs[e];
    reactions.push_back({j, i, a * monomial_value(milp.spec.candidates[j], out.c)});
  }
  out.network = Network(milp.spec.source.species(), milp.spec.candidates, std::move(reactions));

  if (!is_weakly_reversible(out.network))
    throw Error(ErrorKind::VerificationFailure, "recovered network is not weakly reversible");
  if (!verify_linear_conjugacy(milp.spec.source, out.network, out.c).conjugate)
    throw Error(ErrorKind::VerificationFailure,
                "recovered network is not linearly conjugate to the source");
  out.achieved_deficiency = analyze_structure(out.network).delta;
  return out;
}

ModelFormat parse_model_format(const std::string& name) {
  if (name == "mps") return ModelFormat::Mps;
  if (name == "algebraic") return ModelFormat::Algebraic;
  throw Error(ErrorKind::UnsupportedFormat, "unsupported model format '" + name + "'");
}

std::string export_model(const ConjugacyMilp& milp, ModelFormat format) {
  return format == ModelFormat::Mps ? write_mps(milp.problem) : write_algebraic(milp.problem);
}

}  // namespace mindef
