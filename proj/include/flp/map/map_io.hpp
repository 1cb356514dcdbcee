#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "flp/map/map_model.hpp"
#include "flp/map/partitioning.hpp"

namespace flp::map {

/// Map interchange format (see docs/map_format.md). A floor lists either
/// explicit "partitions" or raw "walls" that are partitioned on load.
/// Violations throw Error(InvalidMap) as "file:line: pointer: message".
MapModel parse_map(std::string_view text, const std::string& source_name = "<map>");
MapModel load_map(const std::string& path);

/// Serialises with explicit partitions; parse_map(to_json(m)) reproduces m.
nlohmann::json to_json(const MapModel& map);
void save_map(const MapModel& map, const std::string& path);

/// Builds a floor from raw walls by running compile_partitions.
Floor make_floor(int index, double height, std::vector<Wall> walls, std::vector<Zone> zones,
                 std::vector<Beacon> beacons, const PartitioningOptions& options = {});

}  // namespace flp::map
