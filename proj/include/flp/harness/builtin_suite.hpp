#pragma once

#include <memory>
#include <string>
#include <vector>

#include "flp/harness/scenario.hpp"

namespace flp::harness {

/// 60 m east-west corridor with a single branch heading north at x = 45..47.5.
/// The branch has no mirror image, so a walker starting mid-corridor with an
/// unknown misalignment is ambiguous until the turn.
std::shared_ptr<const map::MapModel> corridor_map();
/// Starts at (30, 1.25), walks east and turns north into the branch. With
/// dpc, the phone is rotated by 90 degrees 8 s after the turn.
Scenario corridor_scenario(std::uint32_t seed = 1, bool dpc = false);

/// 60 x 20 m office: central corridor, ten rooms on each side, four beacons.
std::shared_ptr<const map::MapModel> office_map();
/// Ten-minute room-to-room walk with two device pose changes.
Scenario office_scenario(std::uint32_t seed = 1);

/// Two 30 x 15 m floors joined by a straight stairway.
std::shared_ptr<const map::MapModel> two_floor_map();
Scenario two_floor_scenario(std::uint32_t seed = 1);

/// 40 x 40 m hall with a mezzanine whose beacons leak to the ground floor.
std::shared_ptr<const map::MapModel> open_hall_map();
Scenario open_hall_scenario(std::uint32_t seed = 1);

std::vector<Scenario> builtin_suite();

/// Writes <dir>/<name>/map.json and scenario.json for every scenario.
void export_suite(const std::vector<Scenario>& suite, const std::string& dir);
/// Loads every <dir>/*/scenario.json, sorted by directory name.
std::vector<Scenario> load_suite(const std::string& dir);

}  // namespace flp::harness
