#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mindef/lp_problem.hpp"
#include "mindef/matrix.hpp"
#include "mindef/milp.hpp"
#include "mindef/network.hpp"

namespace mindef {

/// Input of the minimal-deficiency search.
struct ProblemSpec {
  Network source;
  /// Complexes the conjugate network may use, in order. Must be distinct.
  std::vector<Complex> candidates;
  /// Positivity threshold; its reciprocal bounds A_b and u and is the default
  /// big-M. Must lie in (0, 1).
  Rational eps = Rational(1, 100000);
  /// Optional constant for the partition-separation and Phi <= M A_b rows.
  std::optional<Rational> big_m;

  Rational effective_big_m() const { return big_m ? *big_m : Rational(1) / eps; }
};

/// Candidates are the source's complexes followed by `extra` ones not
/// already present (in the order given).
ProblemSpec make_problem_spec(const Network& source, const std::vector<Complex>& extra = {},
                              Rational eps = Rational(1, 100000));

/// The assembled model. Columns are laid out as
///   ab_i_j  (i != j)  rate from complex j to complex i in A_b
///   u_r               reciprocal of the conjugacy constant c_r
///   phi_i_j (i != j)  circulation certifying weak reversibility
///   g_i_k             binary, complex i lies in partition k
///   t_k               partition k is nonempty
/// with 1-based indices in the names and 0-based indices in the accessors.
struct ConjugacyMilp {
  ProblemSpec spec;
  LpProblem problem;
  std::size_t n = 0;   // species
  std::size_t m = 0;   // candidate complexes
  std::size_t s = 0;   // rank of M
  std::size_t partitions = 0;  // m - s
  Matrix y{};  // n x m over the candidates
  Matrix coefficients{};  // M re-expressed over the candidates (n x m)

  std::size_t ab(std::size_t i, std::size_t j) const;
  std::size_t u(std::size_t r) const;
  std::size_t phi(std::size_t i, std::size_t j) const;
  std::size_t g(std::size_t i, std::size_t k) const;
  std::size_t t(std::size_t k) const;

  std::size_t binary_count() const;
  std::size_t continuous_count() const;
};

/// Builds the linear conjugacy, partition, kernel and uniqueness constraint
/// families and the objective (minimize -sum t_k). Throws DegenerateProblem
/// when m <= s and RankFailure when a source monomial is not a candidate.
ConjugacyMilp assemble(const ProblemSpec& spec);

/// Exact test of the partition encoded by g in `values`: true when some
/// A_b, u and Phi satisfy every constraint with that partition fixed.
bool partition_admits_realization(const ConjugacyMilp& milp, const std::vector<double>& values);

/// Greedy partition refinement seeded from a relaxation point; returns the
/// point with g set to the finest feasible partition it reached.
std::optional<std::vector<double>> partition_search(const ConjugacyMilp& milp,
                                                    const std::vector<double>& values);

/// Solver settings suited to the model: unit objective step, a rounding
/// heuristic that reads partitions off the support of A_b, and exact
/// certification of incumbents by partition_admits_realization.
MilpConfig solver_config(const ConjugacyMilp& milp, MilpConfig base = {});

/// Canonical partition labels from the connected components of the support
/// of A_b (entries above eps / 2) in a relaxation point; nullopt when the
/// support has more components than partition slots.
std::optional<std::vector<double>> structure_rounding(const ConjugacyMilp& milp,
                                                      const std::vector<double>& values);

struct ConjugateRealization {
  Network network;               // complexes = candidates
  std::vector<Rational> c;       // conjugacy constants, source species order
  std::vector<std::size_t> partition;  // complex -> 0-based partition slot
  std::size_t nonempty_partitions = 0;
  int achieved_deficiency = 0;
  Rational theta_sum;
};

struct RecoverOptions {
  /// Re-solve exactly at the fixed partition, choosing the realization whose
  /// u is closest to 1 in the l1 sense. When false the exact re-solve only
  /// restores feasibility on the support read from the floating solution.
  bool normalize = true;
};

/// Turns an integral solution into a verified realization. The partition is
/// read from g, then A_b and u are recomputed in exact arithmetic; the result
/// must be weakly reversible and linearly conjugate to the source, otherwise
/// VerificationFailure.
ConjugateRealization recover(const ConjugacyMilp& milp, const std::vector<double>& values,
                             const RecoverOptions& options = {});

enum class ModelFormat { Mps, Algebraic };

/// "mps" or "algebraic"; anything else is UnsupportedFormat.
ModelFormat parse_model_format(const std::string& name);

std::string export_model(const ConjugacyMilp& milp, ModelFormat format);

}  // namespace mindef
