#pragma once

#include <map>
#include <string>
#include <vector>

#include "atomchip/scene.hpp"

namespace atomchip {

using PresetParams = std::map<std::string, double>;

/// Builders for the canonical wire/charge layouts: side guides, two-wire
/// guides, U/Z/H traps, crossed wires, splitters, the conveyor and the
/// planar Ioffe loop geometries. All lengths/currents/fields in SI.
/// Throws PresetError on missing parameters or non-positive dimensions.
Scene buildPreset(const std::string& kind, const PresetParams& params);

std::vector<std::string> presetKinds();

}  // namespace atomchip
