#include "swarmsim/harness/scenario.hpp"

#include "swarmsim/zigzag/protocols.hpp"

namespace swarmsim::harness {

Scenario build_scenario(const ScenarioConfig& cfg, std::uint64_t seed, PacingMode pacing) {
    require_valid(cfg);

    SimulationConfig sc;
    sc.seed = seed;
    sc.medium = cfg.medium;
    sc.telemetry_interval = cfg.telemetry_interval;
    sc.geo_reference = cfg.geo_reference;
    sc.pacing = pacing;

    Scenario s;
    s.sim = std::make_unique<Simulation>(sc);
    const Position origin{};

    s.ground_station = s.sim->add_node(std::make_unique<zigzag::GroundStationProtocol>(cfg.zigzag),
                                       NodeOptions{origin, SimTime::zero(), default_speed,
                                                   "ground_station"});

    std::vector<Position> mission{Position{0.0, 0.0, cfg.uav_altitude}};
    for (int k = 1; k <= cfg.sensor_count; ++k) {
        const Position p{cfg.sensor_spacing * k, 0.0, 0.0};
        s.sensors.push_back(s.sim->add_node(std::make_unique<zigzag::SensorProtocol>(),
                                            NodeOptions{p, SimTime::zero(), default_speed, "sensor"}));
        mission.push_back(Position{p.x, p.y, cfg.uav_altitude});
    }

    for (int k = 1; k <= cfg.uav_count; ++k) {
        zigzag::UavConfig uc;
        uc.mission = mission;
        uc.params = cfg.zigzag;
        uc.initial_position = mission.front();
        const SimTime launch = SimTime::from_seconds(cfg.stagger_interval * k);
        s.uavs.push_back(s.sim->add_node(std::make_unique<zigzag::UavProtocol>(uc),
                                         NodeOptions{mission.front(), launch, cfg.uav_speed, "uav"}));
        s.launch_times.push_back(launch);
    }
    return s;
}

}  // namespace swarmsim::harness
