#include "swarmsim/plugins/random_mobility.hpp"

namespace swarmsim::plugins {

bool Bounds::degenerate() const noexcept {
    if (!min.is_finite() || !max.is_finite()) {
        return true;
    }
    if (max.x < min.x || max.y < min.y || max.z < min.z) {
        return true;
    }
    return max.x == min.x && max.y == min.y && max.z == min.z;
}

bool Bounds::contains(const Position& p) const noexcept {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
           p.z <= max.z;
}

RandomMobility::RandomMobility(Bounds bounds, double arrival_tolerance)
    : bounds_(bounds), tolerance_(arrival_tolerance) {
    if (bounds_.degenerate()) {
        throw std::invalid_argument("random mobility needs a non-degenerate box");
    }
}

void RandomMobility::start(Provider& provider) {
    step(provider);
}

bool RandomMobility::on_telemetry(const Position& position, Provider& provider) {
    if (!target_ || distance(position, *target_) > tolerance_) {
        return false;
    }
    step(provider);
    return true;
}

Position RandomMobility::step(Provider& provider) {
    // Draw order x, y, z is part of the reproducibility contract.
    const double ux = provider.random_uniform();
    const double uy = provider.random_uniform();
    const double uz = provider.random_uniform();
    const Position p{
        bounds_.min.x + (bounds_.max.x - bounds_.min.x) * ux,
        bounds_.min.y + (bounds_.max.y - bounds_.min.y) * uy,
        bounds_.min.z + (bounds_.max.z - bounds_.min.z) * uz,
    };
    target_ = p;
    provider.send_command(MobilityCommand{GotoCoords{p}});
    return p;
}

Position Follower::update(const Position& leader_position, Provider& provider) {
    const Position goal = leader_position + offset_;
    provider.send_command(MobilityCommand{GotoCoords{goal}});
    return goal;
}

}  // namespace swarmsim::plugins
