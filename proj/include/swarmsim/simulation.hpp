#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "swarmsim/event_engine.hpp"
#include "swarmsim/medium.hpp"
#include "swarmsim/mobility.hpp"
#include "swarmsim/protocol.hpp"

namespace swarmsim {

struct SimulationConfig {
    std::uint64_t seed = 0;
    MediumConfig medium;
    double telemetry_interval = 1.0;  // seconds between on_telemetry callbacks
    std::optional<GeoPosition> geo_reference;
    PacingMode pacing = PacingMode::fast;
};

struct NodeOptions {
    Position initial;
    SimTime start_time;  // on_initialize fires here; the node is inert before
    double speed = default_speed;
    std::string role;
};

/// The event-driven environment: one engine, one medium, closed-form
/// mobility, and an encapsulator per node.
class Simulation {
public:
    using DeliveryObserver = std::function<void(NodeId receiver, std::span<const std::uint8_t>)>;
    using TransmissionObserver = std::function<void(NodeId sender, const CommunicationCommand&)>;

    explicit Simulation(SimulationConfig config);
    ~Simulation();

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// Registers a node and binds @p protocol to it. Ids are assigned
    /// densely from 0 in registration order.
    /// @throws DoubleEncapsulation if the protocol is already bound.
    NodeId add_node(std::unique_ptr<Protocol> protocol, NodeOptions options);

    RunStats run_until(SimTime limit);

    /// Delivers on_finish to every initialized node, in id order.
    void finish();

    [[nodiscard]] SimTime now() const noexcept { return engine_.now(); }
    EventEngine& engine() noexcept { return engine_; }
    [[nodiscard]] const SimulationConfig& config() const noexcept { return config_; }

    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
    [[nodiscard]] Position position_of(NodeId id) const;
    [[nodiscard]] const MotionState& motion_of(NodeId id) const;
    [[nodiscard]] const std::string& role_of(NodeId id) const;
    [[nodiscard]] const TrackedVariables& tracked_variables(NodeId id) const;
    [[nodiscard]] bool is_active(NodeId id) const;
    [[nodiscard]] Protocol& protocol(NodeId id);

    /// Called for every message handed to an active protocol.
    void set_delivery_observer(DeliveryObserver observer) { on_delivery_ = std::move(observer); }
    /// Called for every communication command a protocol issues.
    void set_transmission_observer(TransmissionObserver observer) {
        on_transmission_ = std::move(observer);
    }

private:
    class Node;
    struct Reception {
        SimTime arrival;
        std::uint64_t id = 0;
    };
    struct NodeRecord;

    NodeRecord& record(NodeId id);
    const NodeRecord& record(NodeId id) const;

    void launch(NodeId id);
    void telemetry_tick(NodeId id);
    void move(NodeId id, const MobilityCommand& cmd);
    void transmit(NodeId sender, const CommunicationCommand& cmd);
    void deliver(NodeId receiver, const std::shared_ptr<const Bytes>& payload);
    void finish_reception(NodeId receiver, std::uint64_t reception_id, SimTime arrival,
                          const std::shared_ptr<const Bytes>& payload);

    SimulationConfig config_;
    EventEngine engine_;
    Medium medium_;
    SimTime telemetry_period_;
    std::vector<std::unique_ptr<NodeRecord>> nodes_;
    std::uint64_t next_reception_id_ = 1;
    DeliveryObserver on_delivery_;
    TransmissionObserver on_transmission_;
};

}  // namespace swarmsim
