#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>

#include "swarmsim/event_engine.hpp"
#include "swarmsim/sim_time.hpp"
#include "swarmsim/types.hpp"

namespace swarmsim {

// ---------------------------------------------------------------------------
// Command vocabulary shared by every environment.
// ---------------------------------------------------------------------------

struct Telemetry {
    Position current_position;
    SimTime timestamp;
};

struct GotoCoords {
    Position target;
};
struct GotoGeoCoords {
    GeoPosition target;
};
struct SetSpeed {
    double speed = 0.0;  // m/s, > 0
};

using MobilityCommand = std::variant<GotoCoords, GotoGeoCoords, SetSpeed>;

struct SendMessage {
    NodeId target;
    Bytes payload;
};
struct BroadcastMessage {
    Bytes payload;
};

using CommunicationCommand = std::variant<SendMessage, BroadcastMessage>;

/// Opaque label a protocol attaches to its own timers.
struct TimerTag {
    std::string value;

    bool operator==(const TimerTag&) const = default;
};

using TrackedValue = std::variant<double, std::string>;
using TrackedVariables = std::map<std::string, TrackedValue>;

class InvalidCommand : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ProviderMisuse : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class DoubleEncapsulation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class MissingReference : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// @throws InvalidCommand for non-positive speeds, non-finite targets or
/// out-of-range geographic coordinates.
void validate(const MobilityCommand& cmd);

/// @throws InvalidCommand for empty payloads.
void validate(const CommunicationCommand& cmd);

/// Equirectangular projection onto the local tangent plane at @p reference.
/// @throws MissingReference when no reference origin is configured.
Position geo_to_local(const GeoPosition& g, const std::optional<GeoPosition>& reference);

// ---------------------------------------------------------------------------
// Provider / protocol pair.
// ---------------------------------------------------------------------------

/// What a protocol may do to its environment. Calls are only legal while
/// the protocol is handling one of its callbacks.
class Provider {
public:
    virtual ~Provider() = default;

    virtual void send_command(const MobilityCommand& cmd) = 0;
    virtual void send_command(const CommunicationCommand& cmd) = 0;
    virtual EventHandle schedule_timer(TimerTag tag, SimTime fire_at) = 0;
    virtual void cancel_timer(EventHandle handle) = 0;
    [[nodiscard]] virtual SimTime current_time() const = 0;
    [[nodiscard]] virtual NodeId own_id() const = 0;
    virtual void record_tracked_variable(const std::string& name, TrackedValue value) = 0;

    /// Uniform draw in [0, 1) from the environment's seeded stream.
    virtual double random_uniform() = 0;
};

/// Node-local algorithm. Implementations react to the five callbacks and
/// act only through provider().
class Protocol {
public:
    virtual ~Protocol() = default;

    virtual void on_initialize() = 0;
    /// Sender identity is not supplied; protocols embed it in the payload
    /// when they need it.
    virtual void on_message_received(std::span<const std::uint8_t> payload) = 0;
    virtual void on_timer_fired(const TimerTag& tag) = 0;
    virtual void on_telemetry(const Telemetry& telemetry) = 0;
    virtual void on_finish() = 0;

    [[nodiscard]] bool is_bound() const noexcept { return provider_ != nullptr; }

protected:
    /// @throws ProviderMisuse if the protocol is not bound to an environment.
    Provider& provider() const;

private:
    friend class Encapsulator;
    Provider* provider_ = nullptr;
};

/// Glue between a protocol and a concrete environment.
///
/// The encapsulator owns the callback-ordering rules (initialize first,
/// finish last, nothing after finish) and the inside-callback check on
/// every provider call. Environments derive from it and implement the
/// env_* hooks.
class Encapsulator : public Provider {
public:
    explicit Encapsulator(NodeId id) : id_(id) {}
    ~Encapsulator() override;

    Encapsulator(const Encapsulator&) = delete;
    Encapsulator& operator=(const Encapsulator&) = delete;

    /// @throws DoubleEncapsulation if @p protocol is already bound anywhere
    /// or this encapsulator already holds a protocol.
    void bind(Protocol& protocol);

    [[nodiscard]] bool initialized() const noexcept { return state_ != State::fresh; }
    [[nodiscard]] bool finished() const noexcept { return state_ == State::finished; }
    [[nodiscard]] bool active() const noexcept { return state_ == State::active; }

    // Environment-side entry points. Each is a no-op once finished, and
    // everything except deliver_initialize is a no-op before initialization.
    void deliver_initialize();
    void deliver_message(std::span<const std::uint8_t> payload);
    void deliver_timer(const TimerTag& tag);
    void deliver_telemetry(const Telemetry& telemetry);
    void deliver_finish();

    // Provider
    void send_command(const MobilityCommand& cmd) final;
    void send_command(const CommunicationCommand& cmd) final;
    EventHandle schedule_timer(TimerTag tag, SimTime fire_at) final;
    void cancel_timer(EventHandle handle) final;
    [[nodiscard]] SimTime current_time() const final;
    [[nodiscard]] NodeId own_id() const final { return id_; }
    void record_tracked_variable(const std::string& name, TrackedValue value) final;
    double random_uniform() final;

    [[nodiscard]] const TrackedVariables& tracked_variables() const noexcept { return tracked_; }

protected:
    virtual void env_mobility(const MobilityCommand& cmd) = 0;
    virtual void env_communication(const CommunicationCommand& cmd) = 0;
    virtual EventHandle env_schedule_timer(const TimerTag& tag, SimTime fire_at) = 0;
    virtual void env_cancel_timer(EventHandle handle) = 0;
    [[nodiscard]] virtual SimTime env_now() const = 0;
    virtual double env_random() = 0;
    /// Called once after on_finish; environments drop pending timers here.
    virtual void env_finished() {}

private:
    enum class State : std::uint8_t { fresh, active, finished };

    template <class F>
    void dispatch(F&& f);
    void require_callback(const char* what) const;

    NodeId id_;
    Protocol* protocol_ = nullptr;
    State state_ = State::fresh;
    int callback_depth_ = 0;
    TrackedVariables tracked_;
};

}  // namespace swarmsim
