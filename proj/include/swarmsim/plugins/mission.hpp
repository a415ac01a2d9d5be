#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "swarmsim/protocol.hpp"

namespace swarmsim::plugins {

class EmptyMission : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class MissionNotStarted : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class Direction : std::uint8_t { forward, reverse };
enum class LoopPolicy : std::uint8_t { stop, reverse_at_ends };

inline Direction opposite(Direction d) noexcept {
    return d == Direction::forward ? Direction::reverse : Direction::forward;
}

/// Follows an ordered list of waypoints using only provider commands.
///
/// current_index() is the waypoint being flown to. Arrival is detected from
/// telemetry: a waypoint counts as reached once the reported position is
/// within the arrival tolerance, and at most one waypoint is consumed per
/// telemetry update.
class Mission {
public:
    explicit Mission(LoopPolicy policy = LoopPolicy::reverse_at_ends,
                     double arrival_tolerance = 0.5);

    /// Issues GOTO toward the first waypoint. If @p current is known and
    /// already on it, the waypoint is consumed immediately.
    /// @throws EmptyMission if @p waypoints is empty.
    void start(std::vector<Position> waypoints, Provider& provider,
               std::optional<Position> current = std::nullopt);

    /// Feed every telemetry update through here. Returns true when a
    /// waypoint was reached on this update.
    bool on_telemetry(const Position& position, Provider& provider);

    /// Flip direction and head for the neighbouring waypoint on the new
    /// side of the current leg.
    /// @throws MissionNotStarted
    void reverse(Provider& provider);

    /// reverse() if @p d differs from the current direction. A completed
    /// STOP mission is re-opened by this call.
    void set_direction(Direction d, Provider& provider);

    /// Position along the mission in waypoint units: the index of the
    /// waypoint left behind plus the completed fraction of the current leg.
    [[nodiscard]] double progress(const Position& position) const;

    [[nodiscard]] bool started() const noexcept { return !waypoints_.empty(); }
    [[nodiscard]] bool complete() const noexcept { return complete_; }
    [[nodiscard]] std::size_t current_index() const noexcept { return index_; }
    [[nodiscard]] Direction direction() const noexcept { return direction_; }
    [[nodiscard]] LoopPolicy policy() const noexcept { return policy_; }
    [[nodiscard]] const std::vector<Position>& waypoints() const noexcept { return waypoints_; }
    [[nodiscard]] double arrival_tolerance() const noexcept { return tolerance_; }

private:
    void advance(Provider& provider);
    void head_to_current(Provider& provider) const;
    [[nodiscard]] std::optional<std::size_t> previous_index() const;

    std::vector<Position> waypoints_;
    std::size_t index_ = 0;
    Direction direction_ = Direction::forward;
    LoopPolicy policy_;
    double tolerance_;
    bool complete_ = false;
};

}  // namespace swarmsim::plugins
