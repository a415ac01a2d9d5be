#include "swarmsim/protocol.hpp"

#include <cmath>
#include <numbers>

namespace swarmsim {

namespace {

constexpr double meters_per_degree = 111320.0;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void validate(const MobilityCommand& cmd) {
    std::visit(overloaded{
                   [](const GotoCoords& c) {
                       if (!c.target.is_finite()) {
                           throw InvalidCommand("GOTO_COORDS target must be finite");
                       }
                   },
                   [](const GotoGeoCoords& c) {
                       if (!c.target.is_valid()) {
                           throw InvalidCommand("GOTO_GEO_COORDS target out of range");
                       }
                   },
                   [](const SetSpeed& c) {
                       if (!(c.speed > 0.0) || !std::isfinite(c.speed)) {
                           throw InvalidCommand("SET_SPEED requires a positive finite speed");
                       }
                   },
               },
               cmd);
}

void validate(const CommunicationCommand& cmd) {
    const Bytes& payload =
        std::visit([](const auto& c) -> const Bytes& { return c.payload; }, cmd);
    if (payload.empty()) {
        throw InvalidCommand("message payload must not be empty");
    }
}

Position geo_to_local(const GeoPosition& g, const std::optional<GeoPosition>& reference) {
    if (!reference) {
        throw MissingReference("geographic command issued without a configured reference origin");
    }
    const double lat0 = reference->latitude * std::numbers::pi / 180.0;
    return Position{
        (g.longitude - reference->longitude) * std::cos(lat0) * meters_per_degree,
        (g.latitude - reference->latitude) * meters_per_degree,
        g.altitude,
    };
}

Provider& Protocol::provider() const {
    if (provider_ == nullptr) {
        throw ProviderMisuse("protocol is not bound to an environment");
    }
    return *provider_;
}

Encapsulator::~Encapsulator() {
    if (protocol_ != nullptr) {
        protocol_->provider_ = nullptr;
    }
}

void Encapsulator::bind(Protocol& protocol) {
    if (protocol.provider_ != nullptr || protocol_ != nullptr) {
        throw DoubleEncapsulation("protocol instance is already encapsulated");
    }
    protocol.provider_ = this;
    protocol_ = &protocol;
}

template <class F>
void Encapsulator::dispatch(F&& f) {
    ++callback_depth_;
    try {
        f(*protocol_);
    } catch (...) {
        --callback_depth_;
        throw;
    }
    --callback_depth_;
}

void Encapsulator::deliver_initialize() {
    if (protocol_ == nullptr) {
        throw ProviderMisuse("no protocol bound");
    }
    if (state_ != State::fresh) {
        return;
    }
    state_ = State::active;
    dispatch([](Protocol& p) { p.on_initialize(); });
}

void Encapsulator::deliver_message(std::span<const std::uint8_t> payload) {
    if (state_ == State::active) {
        dispatch([&](Protocol& p) { p.on_message_received(payload); });
    }
}

void Encapsulator::deliver_timer(const TimerTag& tag) {
    if (state_ == State::active) {
        dispatch([&](Protocol& p) { p.on_timer_fired(tag); });
    }
}

void Encapsulator::deliver_telemetry(const Telemetry& telemetry) {
    if (state_ == State::active) {
        dispatch([&](Protocol& p) { p.on_telemetry(telemetry); });
    }
}

void Encapsulator::deliver_finish() {
    if (state_ != State::active) {
        state_ = State::finished;
        return;
    }
    dispatch([](Protocol& p) { p.on_finish(); });
    state_ = State::finished;
    env_finished();
}

void Encapsulator::require_callback(const char* what) const {
    if (callback_depth_ == 0) {
        throw ProviderMisuse(std::string(what) + " called outside a protocol callback");
    }
}

void Encapsulator::send_command(const MobilityCommand& cmd) {
    require_callback("send_command");
    validate(cmd);
    env_mobility(cmd);
}

void Encapsulator::send_command(const CommunicationCommand& cmd) {
    require_callback("send_command");
    validate(cmd);
    env_communication(cmd);
}

EventHandle Encapsulator::schedule_timer(TimerTag tag, SimTime fire_at) {
    require_callback("schedule_timer");
    return env_schedule_timer(tag, fire_at);
}

void Encapsulator::cancel_timer(EventHandle handle) {
    require_callback("cancel_timer");
    env_cancel_timer(handle);
}

SimTime Encapsulator::current_time() const {
    require_callback("current_time");
    return env_now();
}

void Encapsulator::record_tracked_variable(const std::string& name, TrackedValue value) {
    require_callback("record_tracked_variable");
    tracked_[name] = std::move(value);
}

double Encapsulator::random_uniform() {
    require_callback("random_uniform");
    return env_random();
}

}  // namespace swarmsim
