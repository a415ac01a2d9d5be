#pragma once

#include <optional>
#include <stdexcept>

#include "swarmsim/protocol.hpp"
#include "swarmsim/sim_time.hpp"
#include "swarmsim/types.hpp"

namespace swarmsim {

inline constexpr double default_speed = 10.0;

class InvalidSpeed : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Straight-line constant-speed motion anchored at a known point.
///
/// Between commands the node moves from anchor_position toward target at
/// speed and stops exactly on the target. Without a target it is still.
struct MotionState {
    Position anchor_position;
    SimTime anchor_time;
    std::optional<Position> target;
    double speed = default_speed;
};

/// Closed-form position; t must not precede the anchor.
Position position_at(const MotionState& state, SimTime t);

/// Time at which the current target is reached, or nullopt when idle.
std::optional<SimTime> arrival_time(const MotionState& state);

/// Re-anchors at position_at(state, at) and applies @p cmd. Geographic
/// targets are projected with @p geo_reference.
/// @throws InvalidSpeed for SET_SPEED <= 0, std::invalid_argument if at
/// precedes the anchor, MissingReference for geo targets without reference.
MotionState apply_command(const MotionState& state, const MobilityCommand& cmd, SimTime at,
                          const std::optional<GeoPosition>& geo_reference = std::nullopt);

/// Drops the target once it has been reached; position is pinned exactly.
MotionState settle(const MotionState& state, SimTime at);

}  // namespace swarmsim
