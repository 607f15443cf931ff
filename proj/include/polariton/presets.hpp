#pragma once

#include "polariton/model.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace polariton {

/// MAPbI3 with the TO-phonon sets at 165 K (tetragonal) and 151 K (orthorhombic).
MaterialModel mapbi3_preset();

std::vector<std::string> preset_names();

/// Looks up a built-in preset by name; throws DomainError if unknown.
MaterialModel preset(const std::string& name);

/// Reads/writes the JSON material schema described in docs/material-schema.md.
MaterialModel material_from_json(const std::string& text);
std::string material_to_json(const MaterialModel& material);
MaterialModel load_material(const std::filesystem::path& path);

} // namespace polariton
