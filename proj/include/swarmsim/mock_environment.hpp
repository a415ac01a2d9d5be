#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "swarmsim/event_engine.hpp"
#include "swarmsim/protocol.hpp"

namespace swarmsim {

class MockNetwork;

/// Scripted stand-in for the simulator. No range, no mobility, no loss
/// unless a drop filter says so: every message reaches its addressees at
/// the instant it is sent. Tests drive time and telemetry by hand and
/// inspect what the protocol asked for.
class MockEncapsulator final : public Encapsulator {
public:
    struct SentMessage {
        SimTime at;
        CommunicationCommand command;
    };
    struct IssuedMove {
        SimTime at;
        MobilityCommand command;
    };

    MockEncapsulator(MockNetwork& network, NodeId id) : Encapsulator(id), network_(network) {}

    [[nodiscard]] const std::vector<SentMessage>& sent() const noexcept { return sent_; }
    [[nodiscard]] const std::vector<IssuedMove>& moves() const noexcept { return moves_; }
    [[nodiscard]] std::size_t pending_timers() const noexcept { return timers_.size(); }
    void clear_log() {
        sent_.clear();
        moves_.clear();
    }

protected:
    void env_mobility(const MobilityCommand& cmd) override;
    void env_communication(const CommunicationCommand& cmd) override;
    EventHandle env_schedule_timer(const TimerTag& tag, SimTime fire_at) override;
    void env_cancel_timer(EventHandle handle) override;
    SimTime env_now() const override;
    double env_random() override;
    void env_finished() override;

private:
    MockNetwork& network_;
    std::vector<SentMessage> sent_;
    std::vector<IssuedMove> moves_;
    std::vector<std::uint64_t> timers_;
};

class MockNetwork {
public:
    using DropFilter =
        std::function<bool(NodeId from, NodeId to, std::span<const std::uint8_t> payload)>;

    explicit MockNetwork(std::uint64_t seed = 0) : engine_(seed) {}

    MockNetwork(const MockNetwork&) = delete;
    MockNetwork& operator=(const MockNetwork&) = delete;

    /// Binds @p protocol to a fresh mock node; ids count up from 0.
    MockEncapsulator& add(Protocol& protocol);
    MockEncapsulator& node(NodeId id);
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }

    void initialize(NodeId id);
    void initialize_all();

    /// Fires timers and message deliveries due up to and including @p t.
    void advance_to(SimTime t);
    void advance_by(double seconds) { advance_to(now() + SimTime::from_seconds(seconds)); }

    /// Hands @p payload to node @p to now, plus anything it triggers.
    void inject(NodeId to, Bytes payload);
    void telemetry(NodeId id, Position position);
    void finish_all();

    /// Returning true drops the message on that hop.
    void set_drop_filter(DropFilter filter) { drop_ = std::move(filter); }

    [[nodiscard]] SimTime now() const noexcept { return engine_.now(); }
    EventEngine& engine() noexcept { return engine_; }

private:
    friend class MockEncapsulator;

    void route(NodeId from, const CommunicationCommand& cmd);
    void settle() { engine_.run_until(engine_.now()); }

    EventEngine engine_;
    std::vector<std::unique_ptr<MockEncapsulator>> nodes_;
    DropFilter drop_;
};

}  // namespace swarmsim
