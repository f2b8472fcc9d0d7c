#pragma once

#include <string>
#include <string_view>

#include "mindef/lp_problem.hpp"

namespace mindef {

/// Fixed-field MPS. Name fields widen past eight characters when a name needs
/// it, keeping every field separated by at least two blanks. Integral
/// columns are bracketed by INTORG/INTEND markers; those with bounds [0, 1]
/// also get BV bound entries. A maximization problem adds an OBJSENSE
/// section. Coefficients print as exact decimals when they terminate.
std::string write_mps(const LpProblem& problem);

/// Reads MPS by whitespace-separated fields (fixed or free layout). Lazy
/// flags are not part of the format, so every row reads back as ordinary.
/// Throws ParseError with the offending line.
LpProblem read_mps(std::string_view text);

/// LP-file style listing with exact rational coefficients; rows marked lazy
/// go in a "lazy constraints" section.
std::string write_algebraic(const LpProblem& problem);

}  // namespace mindef
