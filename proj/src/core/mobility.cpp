#include "swarmsim/mobility.hpp"

#include <cmath>
#include <variant>

namespace swarmsim {

Position position_at(const MotionState& state, SimTime t) {
    if (!state.target) {
        return state.anchor_position;
    }
    const Position delta = *state.target - state.anchor_position;
    const double length = norm(delta);
    if (length == 0.0) {
        return *state.target;
    }
    const double travelled = state.speed * seconds_between(state.anchor_time, t);
    if (travelled >= length || t >= *arrival_time(state)) {
        return *state.target;
    }
    if (travelled <= 0.0) {
        return state.anchor_position;
    }
    return state.anchor_position + delta * (travelled / length);
}

std::optional<SimTime> arrival_time(const MotionState& state) {
    if (!state.target) {
        return std::nullopt;
    }
    const double length = distance(state.anchor_position, *state.target);
    return state.anchor_time + SimTime::from_seconds(length / state.speed);
}

MotionState apply_command(const MotionState& state, const MobilityCommand& cmd, SimTime at,
                          const std::optional<GeoPosition>& geo_reference) {
    if (at < state.anchor_time) {
        throw std::invalid_argument("mobility command precedes the motion anchor");
    }
    MotionState next = state;
    next.anchor_position = position_at(state, at);
    next.anchor_time = at;

    if (const auto* go = std::get_if<GotoCoords>(&cmd)) {
        if (!go->target.is_finite()) {
            throw InvalidCommand("GOTO target must be finite");
        }
        next.target = go->target;
    } else if (const auto* geo = std::get_if<GotoGeoCoords>(&cmd)) {
        if (!geo->target.is_valid()) {
            throw InvalidCommand("GOTO_GEO target out of range");
        }
        next.target = geo_to_local(geo->target, geo_reference);
    } else {
        const double speed = std::get<SetSpeed>(cmd).speed;
        if (!(speed > 0.0) || !std::isfinite(speed)) {
            throw InvalidSpeed("speed must be positive and finite");
        }
        next.speed = speed;
    }
    return next;
}

MotionState settle(const MotionState& state, SimTime at) {
    MotionState next = state;
    next.anchor_time = at;
    const auto arrival = arrival_time(state);
    if (arrival && at >= *arrival) {
        next.anchor_position = *state.target;
        next.target.reset();
    } else {
        next.anchor_position = position_at(state, at);
    }
    return next;
}

}  // namespace swarmsim
