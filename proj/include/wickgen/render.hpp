#pragma once

#include <string>

#include "wickgen/scheme.hpp"

namespace wickgen {

/// Canonical abstract-index display of a term. Output slots print as the
/// letters a, b, c, ...; contracted pairs share a summation letter. Familiar
/// single-curvature contractions are named through a fixed dictionary
/// (double trace -> "R", single trace -> "Ric"); self-contracted derivative
/// pairs on a background block print as "Box". Deterministic.
std::string render_term(const Term& t);

}  // namespace wickgen
