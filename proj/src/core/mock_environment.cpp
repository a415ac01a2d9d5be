#include "swarmsim/mock_environment.hpp"

#include <algorithm>
#include <stdexcept>
#include <variant>

namespace swarmsim {

void MockEncapsulator::env_mobility(const MobilityCommand& cmd) {
    moves_.push_back(IssuedMove{network_.now(), cmd});
}

void MockEncapsulator::env_communication(const CommunicationCommand& cmd) {
    sent_.push_back(SentMessage{network_.now(), cmd});
    network_.route(own_id(), cmd);
}

EventHandle MockEncapsulator::env_schedule_timer(const TimerTag& tag, SimTime fire_at) {
    auto slot = std::make_shared<std::uint64_t>(0);
    const EventHandle h = network_.engine_.schedule(
        fire_at,
        [this, tag, slot] {
            std::erase(timers_, *slot);
            deliver_timer(tag);
        },
        EventKind::timer, own_id());
    *slot = h.id;
    timers_.push_back(h.id);
    return h;
}

void MockEncapsulator::env_cancel_timer(EventHandle handle) {
    if (std::erase(timers_, handle.id) > 0) {
        network_.engine_.cancel(handle);
    }
}

SimTime MockEncapsulator::env_now() const {
    return network_.now();
}

double MockEncapsulator::env_random() {
    return network_.engine_.rng().uniform();
}

void MockEncapsulator::env_finished() {
    for (std::uint64_t id : timers_) {
        network_.engine_.cancel(EventHandle{id});
    }
    timers_.clear();
}

MockEncapsulator& MockNetwork::add(Protocol& protocol) {
    const NodeId id{static_cast<std::uint32_t>(nodes_.size())};
    auto node = std::make_unique<MockEncapsulator>(*this, id);
    node->bind(protocol);
    nodes_.push_back(std::move(node));
    return *nodes_.back();
}

MockEncapsulator& MockNetwork::node(NodeId id) {
    if (id.value >= nodes_.size()) {
        throw std::out_of_range("unknown mock node " + std::to_string(id.value));
    }
    return *nodes_[id.value];
}

void MockNetwork::initialize(NodeId id) {
    node(id).deliver_initialize();
    settle();
}

void MockNetwork::initialize_all() {
    for (auto& n : nodes_) {
        n->deliver_initialize();
    }
    settle();
}

void MockNetwork::advance_to(SimTime t) {
    engine_.run_until(t);
}

void MockNetwork::inject(NodeId to, Bytes payload) {
    MockEncapsulator& target = node(to);
    engine_.schedule(
        engine_.now(), [&target, p = std::move(payload)] { target.deliver_message(p); },
        EventKind::delivery, to);
    settle();
}

void MockNetwork::telemetry(NodeId id, Position position) {
    node(id).deliver_telemetry(Telemetry{position, now()});
    settle();
}

void MockNetwork::finish_all() {
    for (auto& n : nodes_) {
        n->deliver_finish();
    }
}

void MockNetwork::route(NodeId from, const CommunicationCommand& cmd) {
    auto hop = [&](NodeId to, const Bytes& payload) {
        if (drop_ && drop_(from, to, payload)) {
            return;
        }
        MockEncapsulator* target = nodes_[to.value].get();
        engine_.schedule(
            engine_.now(), [target, payload] { target->deliver_message(payload); },
            EventKind::delivery, to);
    };
    if (const auto* send = std::get_if<SendMessage>(&cmd)) {
        if (send->target.value >= nodes_.size()) {
            throw std::out_of_range("mock message to unknown node");
        }
        hop(send->target, send->payload);
        return;
    }
    const Bytes& payload = std::get<BroadcastMessage>(cmd).payload;
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
        if (i != from.value) {
            hop(NodeId{i}, payload);
        }
    }
}

}  // namespace swarmsim
