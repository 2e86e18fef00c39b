#pragma once

#include <span>
#include <string>

#include "lgol/domain.hpp"

namespace lgol {

// FeatureCollection for map inspection: one LineString along `order`, one
// Point per stop carrying its visit index, zone and a per-zone color.
std::string sequence_to_geojson(const Route& route, std::span<const StopIndex> order, const std::string& label);

}  // namespace lgol
