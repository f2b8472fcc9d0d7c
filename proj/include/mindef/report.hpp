#pragma once

#include <string>

#include "json.hpp"
#include "mindef/conjugacy.hpp"
#include "mindef/dynamics.hpp"
#include "mindef/milp.hpp"
#include "mindef/network.hpp"
#include "mindef/structure.hpp"

namespace mindef {

using Json = nlohmann::ordered_json;

/// Version of the report layout; bump when fields change meaning or go away.
inline constexpr int kReportSchemaVersion = 1;

/// All indices in reports are 1-based; rationals are exact strings.
Json network_json(const Network& net);
Json structure_json(const Network& net);
Json solver_json(const MilpSolution& solution);
Json model_json(const ConjugacyMilp& milp);
Json realization_json(const ConjugateRealization& realization);
Json conjugacy_json(const ConjugacyCheck& check, const std::vector<std::string>& species,
                    std::span<const Rational> c);

/// Top-level object with schema_version and command already set.
Json report_header(const std::string& command);

}  // namespace mindef
