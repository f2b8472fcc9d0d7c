#pragma once

#include <cstddef>
#include <vector>

#include "mindef/network.hpp"

namespace mindef {

using IndexSet = std::vector<std::size_t>;

struct StrongComponent {
  IndexSet complexes;  // sorted ascending
  bool terminal = false;
};

/// Structural quantities of a network. Isolated complexes count as their own
/// linkage classes, which leaves the deficiency unchanged.
struct StructuralReport {
  std::size_t m = 0;
  std::size_t ell = 0;
  std::size_t s = 0;
  int delta = 0;
  std::vector<IndexSet> linkage_classes;
  std::vector<StrongComponent> strong_components;
  bool weakly_reversible = false;
  std::vector<int> class_deficiencies;
};

/// Connected components of the undirected reaction graph, ordered by their
/// smallest member.
std::vector<IndexSet> linkage_classes(const Network& net);

/// Maximal strongly connected sets of the directed reaction graph (Tarjan),
/// ordered by smallest member. Terminal means no reaction leaves the set.
std::vector<StrongComponent> strong_components(const Network& net);

bool is_weakly_reversible(const Network& net);

/// Rank of the reaction vectors y_target - y_source.
std::size_t stoich_subspace_dim(const Network& net);

/// The network restricted to `complexes` (in the given order) and the
/// reactions between them.
Network subnetwork(const Network& net, const IndexSet& complexes);

StructuralReport analyze_structure(const Network& net);

inline int deficiency(const Network& net) { return analyze_structure(net).delta; }

/// The three structural hypotheses of the Deficiency One Theorem. Purely a
/// structural check; no dynamical conclusion is drawn.
struct DeficiencyOneReport {
  std::vector<int> class_deficiencies;
  std::vector<std::size_t> terminal_components_per_class;
  bool each_class_at_most_one = false;
  bool sum_matches_total = false;
  bool single_terminal_per_class = false;
  bool all_satisfied = false;
};

DeficiencyOneReport deficiency_one_conditions(const Network& net);

}  // namespace mindef
