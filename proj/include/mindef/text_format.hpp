#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mindef/dynamics.hpp"
#include "mindef/network.hpp"

namespace mindef {

/// Reads a network file (format described in docs/formats.md). Complexes are
/// numbered by first mention, whether in a `complex:` line or a reaction.
/// Errors carry the line and column: ParseError for malformed text,
/// DuplicateComplex for a `complex:` line naming a known complex,
/// DuplicateReaction for a repeated source/target pair.
Network parse_network(std::string_view text);

/// Canonical text: header, species line, every complex in order, then the
/// reactions sorted by (source, target). parse_network inverts it exactly.
std::string print_network(const Network& net);

/// Parses a complex expression such as "2 A + B" or "0" over known species.
Complex parse_complex(std::string_view text, const std::vector<std::string>& species);

/// Reads an ODE file: one `d NAME = polynomial` line per species.
PolySystem parse_ode(std::string_view text);

std::string print_ode(const PolySystem& system);

/// True when the first content line starts an ODE equation ("d NAME =").
bool looks_like_ode(std::string_view text);

}  // namespace mindef
