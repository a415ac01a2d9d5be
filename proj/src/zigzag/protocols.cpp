#include "swarmsim/zigzag/protocols.hpp"

#include <cmath>

namespace swarmsim::zigzag {

namespace {

double homeward_rank(double progress) {
    return std::isinf(progress) && progress < 0.0 ? progress : std::fabs(progress);
}

}  // namespace

std::vector<std::string> Params::problems() const {
    std::vector<std::string> out;
    if (!(heartbeat_interval > 0.0) || !std::isfinite(heartbeat_interval)) {
        out.emplace_back("heartbeat_interval: must be > 0");
    }
    if (!(interaction_timeout >= 0.0) || !std::isfinite(interaction_timeout)) {
        out.emplace_back("interaction_timeout: must be >= 0");
    }
    if (!(pair_confirm_deadline > 0.0) || !std::isfinite(pair_confirm_deadline)) {
        out.emplace_back("pair_confirm_deadline: must be > 0");
    }
    return out;
}

PairOutcome resolve_pair_outcome(const PartyView& self, const PartyView& peer, SimTime now,
                                 double interaction_timeout) {
    const double mine = homeward_rank(self.mission_progress);
    const double theirs = homeward_rank(peer.mission_progress);
    PairOutcome out;
    out.homeward = mine < theirs || (mine == theirs && self.id < peer.id);
    out.data_count = out.homeward ? self.data_count + peer.data_count : 0;
    out.direction = out.homeward ? Direction::reverse : Direction::forward;
    out.ignore_until = now + SimTime::from_seconds(interaction_timeout);
    return out;
}

// ---------------------------------------------------------------------------

PairingProtocol::PairingProtocol(Params params) : params_(params) {
    const auto issues = params_.problems();
    if (!issues.empty()) {
        throw std::invalid_argument("invalid zigzag params: " + issues.front());
    }
}

std::optional<NodeId> PairingProtocol::handshake_peer() const noexcept {
    return awaiting_ ? std::optional(awaiting_->peer) : std::nullopt;
}

void PairingProtocol::on_initialize() {
    on_started();
    heartbeat_offset_ = params_.offset_mode == OffsetMode::random
                            ? provider().random_uniform() * params_.heartbeat_interval
                            : 0.0;
    provider().schedule_timer(heartbeat_tag, provider().current_time() +
                                                 SimTime::from_seconds(heartbeat_offset_));
}

void PairingProtocol::on_timer_fired(const TimerTag& tag) {
    if (tag == heartbeat_tag) {
        send_heartbeat();
        provider().schedule_timer(heartbeat_tag,
                                  provider().current_time() +
                                      SimTime::from_seconds(params_.heartbeat_interval));
    } else if (tag == deadline_tag) {
        // Confirm never came: abandon with no state change.
        awaiting_.reset();
    }
}

Message PairingProtocol::make_message(MessageKind kind) const {
    Message m;
    m.kind = kind;
    m.sender = provider().own_id();
    m.sender_role = role();
    m.data_count = data_count();
    m.mission_progress = mission_progress();
    return m;
}

PartyView PairingProtocol::snapshot() const {
    return PartyView{provider().own_id(), data_count(), mission_progress()};
}

void PairingProtocol::send_heartbeat() {
    provider().send_command(CommunicationCommand{BroadcastMessage{encode(make_message(MessageKind::heartbeat))}});
}

void PairingProtocol::on_message_received(std::span<const std::uint8_t> payload) {
    const auto m = decode(payload);
    if (!m || m->sender == provider().own_id()) {
        return;
    }
    if (m->kind == MessageKind::sensor_data) {
        on_sensor_data(*m);
        return;
    }
    if (m->sender_role == Role::sensor || gated()) {
        return;
    }
    switch (m->kind) {
        case MessageKind::heartbeat:
            handle_heartbeat(*m);
            break;
        case MessageKind::pair_request:
            handle_request(*m);
            break;
        case MessageKind::pair_confirm:
            handle_confirm(*m);
            break;
        case MessageKind::sensor_data:
            break;
    }
}

void PairingProtocol::handle_heartbeat(const Message& m) {
    if (awaiting_) {
        return;
    }
    const PartyView mine = snapshot();
    Message req = make_message(MessageKind::pair_request);
    req.data_count = mine.data_count;
    req.mission_progress = mine.mission_progress;
    provider().send_command(CommunicationCommand{SendMessage{m.sender, encode(req)}});
    const EventHandle deadline = provider().schedule_timer(
        deadline_tag,
        provider().current_time() + SimTime::from_seconds(params_.pair_confirm_deadline));
    awaiting_ = Awaiting{m.sender, mine, deadline};
}

void PairingProtocol::handle_request(const Message& m) {
    if (awaiting_) {
        if (awaiting_->peer != m.sender) {
            return;
        }
        // Both sides requested each other. The smaller id yields and answers.
        if (provider().own_id() > m.sender) {
            return;
        }
        provider().cancel_timer(awaiting_->deadline);
        awaiting_.reset();
    }
    const PartyView mine = snapshot();
    provider().send_command(
        CommunicationCommand{SendMessage{m.sender, encode(make_message(MessageKind::pair_confirm))}});
    commit(mine, m);
}

void PairingProtocol::handle_confirm(const Message& m) {
    if (!awaiting_ || awaiting_->peer != m.sender) {
        return;
    }
    const PartyView reported = awaiting_->reported;
    provider().cancel_timer(awaiting_->deadline);
    awaiting_.reset();
    commit(reported, m);
}

void PairingProtocol::commit(const PartyView& reported, const Message& peer) {
    const PartyView theirs{peer.sender, peer.data_count, peer.mission_progress};
    const PairOutcome outcome = resolve_pair_outcome(reported, theirs, provider().current_time(),
                                                     params_.interaction_timeout);
    ++pairings_;
    apply_outcome(outcome, reported);
}

// ---------------------------------------------------------------------------

UavProtocol::UavProtocol(UavConfig config)
    : PairingProtocol(config.params),
      config_(std::move(config)),
      mission_(plugins::LoopPolicy::reverse_at_ends, config_.arrival_tolerance) {
    if (config_.mission.empty()) {
        throw plugins::EmptyMission("UAV mission needs at least one waypoint");
    }
    last_position_ = config_.initial_position.value_or(config_.mission.front());
}

void UavProtocol::on_started() {
    mission_.start(config_.mission, provider(), last_position_);
    publish();
}

void UavProtocol::on_telemetry(const Telemetry& telemetry) {
    last_position_ = telemetry.current_position;
    mission_.on_telemetry(last_position_, provider());
}

double UavProtocol::mission_progress() const {
    const double p = mission_.progress(last_position_);
    return mission_.direction() == Direction::reverse ? -p : p;
}

bool UavProtocol::gated() const {
    return provider().current_time() < ignore_until();
}

void UavProtocol::on_sensor_data(const Message& m) {
    if (m.sender_role != Role::sensor) {
        return;
    }
    data_count_ += m.data_count;
    publish();
}

void UavProtocol::apply_outcome(const PairOutcome& outcome, const PartyView& reported) {
    // Only what was advertised changes hands; anything collected since stays.
    data_count_ = data_count_ - reported.data_count + outcome.data_count;
    set_ignore_until(outcome.ignore_until);
    mission_.set_direction(outcome.direction, provider());
    publish();
}

void UavProtocol::publish() {
    provider().record_tracked_variable("data_count", static_cast<double>(data_count_));
    provider().record_tracked_variable(
        "direction", std::string(mission_.direction() == Direction::forward ? "forward" : "reverse"));
}

// ---------------------------------------------------------------------------

void GroundStationProtocol::on_started() {
    provider().record_tracked_variable("collected", static_cast<double>(collected_));
}

void GroundStationProtocol::apply_outcome(const PairOutcome& outcome, const PartyView& reported) {
    collected_ = collected_ - reported.data_count + outcome.data_count;
    provider().record_tracked_variable("collected", static_cast<double>(collected_));
}

// ---------------------------------------------------------------------------

void SensorProtocol::on_initialize() {
    provider().record_tracked_variable("responses", 0.0);
}

void SensorProtocol::on_message_received(std::span<const std::uint8_t> payload) {
    const auto m = decode(payload);
    if (!m || m->kind != MessageKind::heartbeat || m->sender_role != Role::uav) {
        return;
    }
    Message reply;
    reply.kind = MessageKind::sensor_data;
    reply.sender = provider().own_id();
    reply.sender_role = Role::sensor;
    reply.data_count = 1;
    provider().send_command(CommunicationCommand{SendMessage{m->sender, encode(reply)}});
    ++responses_;
    provider().record_tracked_variable("responses", static_cast<double>(responses_));
}

}  // namespace swarmsim::zigzag
