#include "mindef/report.hpp"

#include <cmath>

#include "mindef/text_format.hpp"

namespace mindef {

namespace {

Json index_set(const IndexSet& set) {
  Json out = Json::array();
  for (std::size_t i : set) out.push_back(i + 1);
  return out;
}

Json rationals(std::span<const Rational> values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(format_rational(v));
  return out;
}

}  // namespace

Json report_header(const std::string& command) {
  Json out;
  out["schema_version"] = kReportSchemaVersion;
  out["command"] = command;
  return out;
}

Json network_json(const Network& net) {
  Json out;
  out["species"] = net.species();
  Json complexes = Json::array();
  for (const auto& c : net.complexes()) complexes.push_back(format_complex(c, net.species()));
  out["complexes"] = complexes;
  Json reactions = Json::array();
  for (const auto& r : net.reactions()) {
    Json e;
    e["source"] = r.source + 1;
    e["target"] = r.target + 1;
    e["rate"] = format_rational(r.rate);
    reactions.push_back(e);
  }
  out["reactions"] = reactions;
  out["text"] = print_network(net);
  return out;
}

Json structure_json(const Network& net) {
  const StructuralReport rep = analyze_structure(net);
  const DeficiencyOneReport d1 = deficiency_one_conditions(net);
  Json out;
  out["m"] = rep.m;
  out["ell"] = rep.ell;
  out["s"] = rep.s;
  out["deficiency"] = rep.delta;
  out["weakly_reversible"] = rep.weakly_reversible;
  Json classes = Json::array();
  for (std::size_t k = 0; k < rep.linkage_classes.size(); ++k) {
    Json c;
    c["complexes"] = index_set(rep.linkage_classes[k]);
    c["deficiency"] = rep.class_deficiencies[k];
    c["terminal_components"] = d1.terminal_components_per_class[k];
    classes.push_back(c);
  }
  out["linkage_classes"] = classes;
  Json strong = Json::array();
  for (const auto& sc : rep.strong_components) {
    Json c;
    c["complexes"] = index_set(sc.complexes);
    c["terminal"] = sc.terminal;
    strong.push_back(c);
  }
  out["strong_components"] = strong;
  Json cond;
  cond["each_class_at_most_one"] = d1.each_class_at_most_one;
  cond["sum_matches_total"] = d1.sum_matches_total;
  cond["single_terminal_per_class"] = d1.single_terminal_per_class;
  cond["all_satisfied"] = d1.all_satisfied;
  out["deficiency_one_conditions"] = cond;
  return out;
}

Json solver_json(const MilpSolution& solution) {
  Json out;
  out["status"] = to_string(solution.status);
  if (solution.has_incumbent()) {
    out["objective"] = solution.objective;
    out["gap"] = solution.gap();
  } else {
    out["objective"] = nullptr;
    out["gap"] = nullptr;
  }
  out["best_bound"] = std::isfinite(solution.best_bound) ? Json(solution.best_bound) : Json(nullptr);
  out["nodes"] = solution.nodes;
  out["lp_iterations"] = solution.lp_iterations;
  out["rejected_integral_points"] = solution.rejected;
  out["exact_fallbacks"] = solution.exact_fallbacks;
  out["seconds"] = solution.seconds;
  return out;
}

Json model_json(const ConjugacyMilp& milp) {
  Json out;
  out["species"] = milp.n;
  out["candidate_complexes"] = milp.m;
  out["rank"] = milp.s;
  out["partition_slots"] = milp.partitions;
  out["binary_variables"] = milp.binary_count();
  out["continuous_variables"] = milp.continuous_count();
  out["rows"] = milp.problem.row_count();
  out["eps"] = format_rational(milp.spec.eps);
  out["big_m"] = format_rational(milp.spec.effective_big_m());
  Json candidates = Json::array();
  for (const auto& c : milp.spec.candidates)
    candidates.push_back(format_complex(c, milp.spec.source.species()));
  out["candidates"] = candidates;
  return out;
}

Json realization_json(const ConjugateRealization& realization) {
  Json out;
  out["achieved_deficiency"] = realization.achieved_deficiency;
  out["nonempty_partitions"] = realization.nonempty_partitions;
  out["theta_sum"] = format_rational(realization.theta_sum);
  out["c"] = rationals(realization.c);
  Json partition = Json::array();
  for (std::size_t k : realization.partition) partition.push_back(k + 1);
  out["partition"] = partition;
  out["network"] = network_json(realization.network);
  out["structure"] = structure_json(realization.network);
  return out;
}

Json conjugacy_json(const ConjugacyCheck& check, const std::vector<std::string>& species,
                    std::span<const Rational> c) {
  Json out;
  out["conjugate"] = check.conjugate;
  out["c"] = rationals(c);
  Json residuals = Json::array();
  for (const auto& r : check.residuals) {
    Json e;
    e["monomial"] = format_complex(r.monomial, species);
    e["species"] = species[r.species];
    e["residual"] = format_rational(r.value);
    residuals.push_back(e);
  }
  out["residuals"] = residuals;
  return out;
}

}  // namespace mindef
