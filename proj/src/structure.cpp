#include "mindef/structure.hpp"

#include <algorithm>
#include <numeric>

#include "mindef/error.hpp"

namespace mindef {

namespace {

std::vector<std::vector<std::size_t>> out_edges(const Network& net) {
  std::vector<std::vector<std::size_t>> adj(net.complex_count());
  for (const auto& r : net.reactions()) adj[r.source].push_back(r.target);
  return adj;
}

}  // namespace

std::vector<IndexSet> linkage_classes(const Network& net) {
  const std::size_t m = net.complex_count();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& r : net.reactions()) {
    std::size_t a = find(r.source), b = find(r.target);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<IndexSet> classes;
  std::vector<std::ptrdiff_t> slot(m, -1);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::ptrdiff_t>(classes.size());
      classes.emplace_back();
    }
    classes[static_cast<std::size_t>(slot[root])].push_back(i);
  }
  return classes;
}

std::vector<StrongComponent> strong_components(const Network& net) {
  const std::size_t m = net.complex_count();
  const auto adj = out_edges(net);
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(m, kUnvisited), low(m, 0), comp(m, kUnvisited);
  std::vector<bool> on_stack(m, false);
  std::vector<std::size_t> stack;
  std::vector<IndexSet> found;
  std::size_t counter = 0;

  // Iterative Tarjan: frames hold (vertex, next edge position).
  for (std::size_t root = 0; root < m; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < adj[v].size()) {
        std::size_t w = adj[v][next++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        IndexSet members;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = found.size();
          members.push_back(w);
        } while (w != v);
        std::sort(members.begin(), members.end());
        found.push_back(std::move(members));
      }
      std::size_t finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }

  std::vector<bool> terminal(found.size(), true);
  for (const auto& r : net.reactions())
    if (comp[r.source] != comp[r.target]) terminal[comp[r.source]] = false;

  std::vector<StrongComponent> out;
  out.reserve(found.size());
  for (std::size_t c = 0; c < found.size(); ++c) out.push_back({found[c], terminal[c]});
  std::sort(out.begin(), out.end(), [](const StrongComponent& a, const StrongComponent& b) {
    return a.complexes.front() < b.complexes.front();
  });
  return out;
}

bool is_weakly_reversible(const Network& net) {
  for (const auto& c : strong_components(net))
    if (!c.terminal) return false;
  return true;
}

std::size_t stoich_subspace_dim(const Network& net) {
  const auto& reactions = net.reactions();
  if (reactions.empty()) return 0;
  Matrix vectors(reactions.size(), net.species_count());
  for (std::size_t r = 0; r < reactions.size(); ++r) {
    const auto& src = net.complexes()[reactions[r].source];
    const auto& dst = net.complexes()[reactions[r].target];
    for (std::size_t i = 0; i < net.species_count(); ++i) vectors(r, i) = dst[i] - src[i];
  }
  return rank(std::move(vectors));
}

Network subnetwork(const Network& net, const IndexSet& complexes) {
  std::vector<std::ptrdiff_t> local(net.complex_count(), -1);
  std::vector<Complex> kept;
  for (std::size_t k = 0; k < complexes.size(); ++k) {
    local[complexes[k]] = static_cast<std::ptrdiff_t>(k);
    kept.push_back(net.complexes()[complexes[k]]);
  }
  std::vector<Reaction> reactions;
  for (const auto& r : net.reactions())
    if (local[r.source] >= 0 && local[r.target] >= 0)
      reactions.push_back({static_cast<std::size_t>(local[r.source]),
                           static_cast<std::size_t>(local[r.target]), r.rate});
  return Network(net.species(), std::move(kept), std::move(reactions));
}

namespace {

int raw_deficiency(std::size_t m, std::size_t ell, std::size_t s) {
  int delta = static_cast<int>(m) - static_cast<int>(ell) - static_cast<int>(s);
  if (delta < 0)
    throw Error(ErrorKind::Internal, "computed a negative deficiency (m=" + std::to_string(m) +
                                         ", l=" + std::to_string(ell) +
                                         ", s=" + std::to_string(s) + ")");
  return delta;
}

}  // namespace

StructuralReport analyze_structure(const Network& net) {
  StructuralReport report;
  report.m = net.complex_count();
  report.linkage_classes = linkage_classes(net);
  report.ell = report.linkage_classes.size();
  report.s = stoich_subspace_dim(net);
  report.delta = raw_deficiency(report.m, report.ell, report.s);
  report.strong_components = strong_components(net);
  report.weakly_reversible =
      std::all_of(report.strong_components.begin(), report.strong_components.end(),
                  [](const StrongComponent& c) { return c.terminal; });
  for (const auto& cls : report.linkage_classes) {
    Network sub = subnetwork(net, cls);
    report.class_deficiencies.push_back(raw_deficiency(cls.size(), 1, stoich_subspace_dim(sub)));
  }
  return report;
}

DeficiencyOneReport deficiency_one_conditions(const Network& net) {
  StructuralReport structure = analyze_structure(net);
  DeficiencyOneReport report;
  report.class_deficiencies = structure.class_deficiencies;

  std::vector<std::size_t> class_of(net.complex_count());
  for (std::size_t k = 0; k < structure.linkage_classes.size(); ++k)
    for (std::size_t c : structure.linkage_classes[k]) class_of[c] = k;
  report.terminal_components_per_class.assign(structure.linkage_classes.size(), 0);
  for (const auto& sc : structure.strong_components)
    if (sc.terminal) ++report.terminal_components_per_class[class_of[sc.complexes.front()]];

  report.each_class_at_most_one =
      std::all_of(report.class_deficiencies.begin(), report.class_deficiencies.end(),
                  [](int d) { return d <= 1; });
  int sum = std::accumulate(report.class_deficiencies.begin(), report.class_deficiencies.end(), 0);
  report.sum_matches_total = sum == structure.delta;
  report.single_terminal_per_class =
      std::all_of(report.terminal_components_per_class.begin(),
                  report.terminal_components_per_class.end(),
                  [](std::size_t t) { return t == 1; });
  report.all_satisfied = report.each_class_at_most_one && report.sum_matches_total &&
                         report.single_terminal_per_class;
  return report;
}

}  // namespace mindef
