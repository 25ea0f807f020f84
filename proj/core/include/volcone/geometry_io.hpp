#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "volcone/lattice.hpp"

namespace volcone {

/// Reads a geometry document. Every SurfaceGeometry invariant is checked.
SurfaceGeometry load_geometry(const nlohmann::json& document);
nlohmann::json save_geometry(const SurfaceGeometry& geometry);

SurfaceGeometry load_geometry_file(const std::filesystem::path& path);
void save_geometry_file(const SurfaceGeometry& geometry, const std::filesystem::path& path);

/// Resolves a builtin name, a file path, or a file found on the
/// colon-separated search path in VOLCONE_GEOM_PATH (tried as given and with ".json").
SurfaceGeometry resolve_geometry(std::string_view source);

}  // namespace volcone
