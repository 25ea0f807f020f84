#pragma once

#include <string_view>

#include "volcone/lattice.hpp"

namespace volcone {

/// Parses a signed rational combination of basis labels such as
/// "2H-1E", "3/2H+E1-2E2" or "0.5C0 + f". Whitespace is ignored and
/// the longest matching label wins. A bare number is rejected unless
/// the geometry has rank one, in which case "3" means three times the generator.
DivisorClass parse_class(std::string_view expr, const SurfaceGeometry& geometry);

/// Parses a comma-separated coordinate list such as "1,-1/2".
RationalVector parse_coords(std::string_view text);

}  // namespace volcone
