#pragma once

#include <optional>
#include <stdexcept>

#include "swarmsim/protocol.hpp"

namespace swarmsim::plugins {

/// Axis-aligned box. A zero-thickness axis is allowed (e.g. flat z) as long
/// as at least one axis has extent.
struct Bounds {
    Position min;
    Position max;

    [[nodiscard]] bool degenerate() const noexcept;
    [[nodiscard]] bool contains(const Position& p) const noexcept;
    [[nodiscard]] Position center() const noexcept { return (min + max) * 0.5; }
};

/// Random-waypoint movement: on every arrival, pick a fresh target drawn
/// uniformly from the box using the environment's random stream.
class RandomMobility {
public:
    /// @throws std::invalid_argument for degenerate or inverted bounds.
    explicit RandomMobility(Bounds bounds, double arrival_tolerance = 0.5);

    /// Draws the first target and issues GOTO toward it.
    void start(Provider& provider);

    /// Issues a new GOTO if @p position has reached the current target.
    bool on_telemetry(const Position& position, Provider& provider);

    /// Draws one target and issues GOTO toward it.
    Position step(Provider& provider);

    [[nodiscard]] const std::optional<Position>& target() const noexcept { return target_; }
    [[nodiscard]] const Bounds& bounds() const noexcept { return bounds_; }

private:
    Bounds bounds_;
    double tolerance_;
    std::optional<Position> target_;
};

/// Fixed-offset follower. Getting the leader's position to the follower is
/// the caller's business (typically a broadcast payload).
class Follower {
public:
    explicit Follower(Position offset = {}) : offset_(offset) {}

    /// Issues GOTO toward leader_position + offset and returns that point.
    Position update(const Position& leader_position, Provider& provider);

    void set_offset(Position offset) noexcept { offset_ = offset; }
    [[nodiscard]] const Position& offset() const noexcept { return offset_; }

private:
    Position offset_;
};

}  // namespace swarmsim::plugins
