#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "swarmsim/plugins/mission.hpp"
#include "swarmsim/protocol.hpp"
#include "swarmsim/zigzag/message.hpp"

namespace swarmsim::zigzag {

using plugins::Direction;

enum class OffsetMode : std::uint8_t { random, zero };

struct Params {
    double heartbeat_interval = 1.0;
    /// Inbound UAV/GS traffic is ignored this long after a completed
    /// pairing. Zero disables the gate.
    double interaction_timeout = 5.0;
    OffsetMode offset_mode = OffsetMode::random;
    double pair_confirm_deadline = 1.0;

    [[nodiscard]] std::vector<std::string> problems() const;
};

/// Mission progress advertised by the ground station: it is always the
/// party nearest home.
inline constexpr double ground_station_progress = -std::numeric_limits<double>::infinity();

struct PartyView {
    NodeId id;
    std::uint64_t data_count = 0;
    double mission_progress = 0.0;
};

struct PairOutcome {
    bool homeward = false;  // this party carries the pair's data toward the GS
    std::uint64_t data_count = 0;
    Direction direction = Direction::forward;
    SimTime ignore_until;
};

/// Decides one side of a completed pairing.
///
/// The party nearer the ground station along the mission goes home with
/// everything; the other heads back out empty. Distance from home is the
/// magnitude of the advertised progress (the sign only encodes direction),
/// with the ground-station sentinel below everything; ties go to the
/// smaller id. Both sides evaluating this on the same two views agree.
PairOutcome resolve_pair_outcome(const PartyView& self, const PartyView& peer, SimTime now,
                                 double interaction_timeout);

/// Heartbeat plus the heartbeat / pair-request / pair-confirm handshake,
/// shared by UAVs and the ground station.
class PairingProtocol : public Protocol {
public:
    explicit PairingProtocol(Params params);

    void on_initialize() override;
    void on_message_received(std::span<const std::uint8_t> payload) override;
    void on_timer_fired(const TimerTag& tag) override;
    void on_finish() override {}

    [[nodiscard]] const Params& params() const noexcept { return params_; }
    [[nodiscard]] bool awaiting_confirm() const noexcept { return awaiting_.has_value(); }
    [[nodiscard]] std::optional<NodeId> handshake_peer() const noexcept;
    [[nodiscard]] SimTime ignore_until() const noexcept { return ignore_until_; }
    [[nodiscard]] std::uint64_t completed_pairings() const noexcept { return pairings_; }
    [[nodiscard]] double heartbeat_offset() const noexcept { return heartbeat_offset_; }

    static inline const TimerTag heartbeat_tag{"heartbeat"};
    static inline const TimerTag deadline_tag{"pair-deadline"};

protected:
    [[nodiscard]] virtual Role role() const = 0;
    [[nodiscard]] virtual std::uint64_t data_count() const = 0;
    [[nodiscard]] virtual double mission_progress() const = 0;
    /// @p reported is what this side advertised in its handshake message.
    virtual void apply_outcome(const PairOutcome& outcome, const PartyView& reported) = 0;
    virtual void on_sensor_data(const Message&) {}
    virtual void on_started() {}
    /// Whether pairing traffic is ignored right now.
    [[nodiscard]] virtual bool gated() const { return false; }

    void set_ignore_until(SimTime t) noexcept { ignore_until_ = t; }
    [[nodiscard]] Message make_message(MessageKind kind) const;

private:
    struct Awaiting {
        NodeId peer;
        PartyView reported;
        EventHandle deadline;
    };

    void send_heartbeat();
    void handle_heartbeat(const Message& m);
    void handle_request(const Message& m);
    void handle_confirm(const Message& m);
    void commit(const PartyView& reported, const Message& peer);
    [[nodiscard]] PartyView snapshot() const;

    Params params_;
    std::optional<Awaiting> awaiting_;
    SimTime ignore_until_;
    std::uint64_t pairings_ = 0;
    double heartbeat_offset_ = 0.0;
};

struct UavConfig {
    std::vector<Position> mission;  // waypoint 0 is the ground station
    Params params;
    std::optional<Position> initial_position;  // defaults to mission[0]
    double arrival_tolerance = 0.5;
};

class UavProtocol final : public PairingProtocol {
public:
    explicit UavProtocol(UavConfig config);

    void on_telemetry(const Telemetry& telemetry) override;

    [[nodiscard]] std::uint64_t data_count() const override { return data_count_; }
    /// Fractional mission index, negated while flying in reverse.
    [[nodiscard]] double mission_progress() const override;
    [[nodiscard]] const plugins::Mission& mission() const noexcept { return mission_; }
    [[nodiscard]] Direction direction() const noexcept { return mission_.direction(); }

protected:
    [[nodiscard]] Role role() const override { return Role::uav; }
    void apply_outcome(const PairOutcome& outcome, const PartyView& reported) override;
    void on_sensor_data(const Message& m) override;
    void on_started() override;
    [[nodiscard]] bool gated() const override;

private:
    void publish();

    UavConfig config_;
    plugins::Mission mission_;
    Position last_position_;
    std::uint64_t data_count_ = 0;
};

class GroundStationProtocol final : public PairingProtocol {
public:
    explicit GroundStationProtocol(Params params) : PairingProtocol(params) {}

    void on_telemetry(const Telemetry&) override {}

    [[nodiscard]] std::uint64_t collected() const noexcept { return collected_; }
    [[nodiscard]] std::uint64_t data_count() const override { return collected_; }
    [[nodiscard]] double mission_progress() const override { return ground_station_progress; }

protected:
    [[nodiscard]] Role role() const override { return Role::ground_station; }
    void apply_outcome(const PairOutcome& outcome, const PartyView& reported) override;
    void on_started() override;

private:
    std::uint64_t collected_ = 0;
};

/// Stationary sensor: answers every UAV heartbeat with one unit of data.
class SensorProtocol final : public Protocol {
public:
    void on_initialize() override;
    void on_message_received(std::span<const std::uint8_t> payload) override;
    void on_timer_fired(const TimerTag&) override {}
    void on_telemetry(const Telemetry&) override {}
    void on_finish() override {}

    [[nodiscard]] std::uint64_t responses() const noexcept { return responses_; }

private:
    std::uint64_t responses_ = 0;
};

}  // namespace swarmsim::zigzag
