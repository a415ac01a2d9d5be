#pragma once

#include <memory>
#include <vector>

#include "swarmsim/harness/config.hpp"
#include "swarmsim/simulation.hpp"

namespace swarmsim::harness {

/// A built ZigZag scenario. Node ids: ground station first, then sensors
/// in order along the line, then UAVs in launch order.
struct Scenario {
    std::unique_ptr<Simulation> sim;
    NodeId ground_station;
    std::vector<NodeId> sensors;
    std::vector<NodeId> uavs;
    std::vector<SimTime> launch_times;  // parallel to uavs
};

/// Ground station at the origin, sensor k (1-based) at x = k * spacing,
/// every UAV parked at the origin until its launch at k * stagger_interval.
/// Each UAV flies [GS, sensor 1, ..., sensor N] and turns around at the ends.
/// @throws ConfigError for invalid configs.
Scenario build_scenario(const ScenarioConfig& cfg, std::uint64_t seed,
                        PacingMode pacing = PacingMode::fast);

}  // namespace swarmsim::harness
