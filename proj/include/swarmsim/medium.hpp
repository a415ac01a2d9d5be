#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmsim/rng.hpp"
#include "swarmsim/sim_time.hpp"
#include "swarmsim/types.hpp"

namespace swarmsim {

class UnknownTarget : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct MediumConfig {
    double range = 50.0;              // meters
    double delay = 0.0;               // seconds
    double drop_probability = 0.0;    // [0, 1]
    bool collision_model = false;
    double transmission_duration = 0.010;  // seconds, used when collision_model is on

    /// One "field: problem" string per violated constraint; empty when valid.
    [[nodiscard]] std::vector<std::string> problems() const;
};

struct Transmission {
    NodeId sender;
    std::optional<NodeId> target;  // empty for broadcast
    SimTime sent_at;
};

struct NodePosition {
    NodeId id;
    Position position;
};

struct Delivery {
    NodeId recipient;
    SimTime arrival;
};

/// Distance check, boundary inclusive.
bool in_range(Position a, Position b, double range) noexcept;

/// Range-and-loss model. Decides at send time which nodes hear a
/// transmission; the caller schedules the resulting deliveries.
class Medium {
public:
    /// @throws std::invalid_argument when @p config has problems().
    explicit Medium(MediumConfig config);

    [[nodiscard]] const MediumConfig& config() const noexcept { return config_; }

    /// Recipients are visited in the order of @p positions; each one in
    /// range costs exactly one draw from @p rng. Out-of-range recipients
    /// are skipped silently.
    /// @throws UnknownTarget if a targeted node is absent from @p positions.
    [[nodiscard]] std::vector<Delivery> transmit(const Transmission& t,
                                                 std::span<const NodePosition> positions,
                                                 Rng& rng) const;

private:
    MediumConfig config_;
};

/// Receiver-side collision resolution.
///
/// Every arrival occupies [arrival, arrival + duration) at the receiver,
/// as does every transmission the receiver itself starts (the radio cannot
/// listen while it talks). An arrival survives iff its window overlaps no
/// other window. Returns indices into @p arrivals of the survivors, in
/// ascending order.
std::vector<std::size_t> resolve_collisions(std::span<const SimTime> arrivals, SimTime duration,
                                            std::span<const SimTime> own_transmissions = {});

}  // namespace swarmsim
