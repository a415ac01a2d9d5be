#include "swarmsim/simulation.hpp"

#include <algorithm>
#include <stdexcept>
#include <variant>

namespace swarmsim {

/// Encapsulator backed by the simulation.
class Simulation::Node final : public Encapsulator {
public:
    Node(Simulation& sim, NodeId id) : Encapsulator(id), sim_(sim) {}

    std::unordered_set<std::uint64_t> timers;

protected:
    void env_mobility(const MobilityCommand& cmd) override { sim_.move(own_id(), cmd); }

    void env_communication(const CommunicationCommand& cmd) override {
        sim_.transmit(own_id(), cmd);
    }

    EventHandle env_schedule_timer(const TimerTag& tag, SimTime fire_at) override {
        // The id is only known after scheduling; the set lookup happens at fire time.
        auto slot = std::make_shared<std::uint64_t>(0);
        const EventHandle h = sim_.engine_.schedule(
            fire_at,
            [this, tag, slot] {
                timers.erase(*slot);
                deliver_timer(tag);
            },
            EventKind::timer, own_id());
        *slot = h.id;
        timers.insert(h.id);
        return h;
    }

    void env_cancel_timer(EventHandle handle) override {
        if (timers.erase(handle.id) > 0) {
            sim_.engine_.cancel(handle);
        }
    }

    SimTime env_now() const override { return sim_.engine_.now(); }

    double env_random() override { return sim_.engine_.rng().uniform(); }

    void env_finished() override {
        for (std::uint64_t id : timers) {
            sim_.engine_.cancel(EventHandle{id});
        }
        timers.clear();
    }

private:
    Simulation& sim_;
};

struct Simulation::NodeRecord {
    std::string role;
    MotionState motion;
    EventHandle arrival;
    EventHandle telemetry;
    std::unique_ptr<Protocol> protocol;
    std::unique_ptr<Node> node;
    // Collision bookkeeping: recent arrival windows and own transmissions.
    std::deque<Reception> receptions;
    std::deque<SimTime> own_transmissions;
};

Simulation::Simulation(SimulationConfig config)
    : config_(config),
      engine_(config.seed, config.pacing),
      medium_(config.medium),
      telemetry_period_(SimTime::from_seconds(config.telemetry_interval)) {
    if (telemetry_period_ == SimTime::zero()) {
        throw std::invalid_argument("telemetry_interval must be positive");
    }
}

Simulation::~Simulation() = default;

Simulation::NodeRecord& Simulation::record(NodeId id) {
    if (id.value >= nodes_.size()) {
        throw std::out_of_range("unknown node " + std::to_string(id.value));
    }
    return *nodes_[id.value];
}

const Simulation::NodeRecord& Simulation::record(NodeId id) const {
    if (id.value >= nodes_.size()) {
        throw std::out_of_range("unknown node " + std::to_string(id.value));
    }
    return *nodes_[id.value];
}

NodeId Simulation::add_node(std::unique_ptr<Protocol> protocol, NodeOptions options) {
    if (!protocol) {
        throw std::invalid_argument("add_node requires a protocol");
    }
    if (!options.initial.is_finite() || !(options.speed > 0.0)) {
        throw std::invalid_argument("node needs a finite position and positive speed");
    }
    const NodeId id{static_cast<std::uint32_t>(nodes_.size())};
    auto rec = std::make_unique<NodeRecord>();
    rec->role = std::move(options.role);
    rec->motion = MotionState{options.initial, SimTime::zero(), std::nullopt, options.speed};
    rec->node = std::make_unique<Node>(*this, id);
    rec->node->bind(*protocol);
    rec->protocol = std::move(protocol);
    nodes_.push_back(std::move(rec));

    engine_.schedule(std::max(options.start_time, engine_.now()), [this, id] { launch(id); },
                     EventKind::launch, id);
    return id;
}

RunStats Simulation::run_until(SimTime limit) {
    return engine_.run_until(limit);
}

void Simulation::finish() {
    for (auto& rec : nodes_) {
        engine_.cancel(rec->telemetry);
        engine_.cancel(rec->arrival);
        rec->node->deliver_finish();
    }
}

Position Simulation::position_of(NodeId id) const {
    return position_at(record(id).motion, engine_.now());
}

const MotionState& Simulation::motion_of(NodeId id) const {
    return record(id).motion;
}

const std::string& Simulation::role_of(NodeId id) const {
    return record(id).role;
}

const TrackedVariables& Simulation::tracked_variables(NodeId id) const {
    return record(id).node->tracked_variables();
}

bool Simulation::is_active(NodeId id) const {
    return record(id).node->active();
}

Protocol& Simulation::protocol(NodeId id) {
    return *record(id).protocol;
}

void Simulation::launch(NodeId id) {
    NodeRecord& rec = record(id);
    rec.node->deliver_initialize();
    if (rec.node->active()) {
        rec.telemetry = engine_.schedule(engine_.now() + telemetry_period_,
                                         [this, id] { telemetry_tick(id); },
                                         EventKind::telemetry, id);
    }
}

void Simulation::telemetry_tick(NodeId id) {
    NodeRecord& rec = record(id);
    rec.node->deliver_telemetry(Telemetry{position_at(rec.motion, engine_.now()), engine_.now()});
    if (rec.node->active()) {
        rec.telemetry = engine_.schedule(engine_.now() + telemetry_period_,
                                         [this, id] { telemetry_tick(id); },
                                         EventKind::telemetry, id);
    }
}

void Simulation::move(NodeId id, const MobilityCommand& cmd) {
    NodeRecord& rec = record(id);
    rec.motion = apply_command(rec.motion, cmd, engine_.now(), config_.geo_reference);
    engine_.cancel(rec.arrival);
    rec.arrival = {};
    if (const auto at = arrival_time(rec.motion)) {
        rec.arrival = engine_.schedule(
            *at,
            [this, id] {
                NodeRecord& r = record(id);
                r.motion = settle(r.motion, engine_.now());
                r.arrival = {};
            },
            EventKind::mobility, id);
    }
}

void Simulation::transmit(NodeId sender, const CommunicationCommand& cmd) {
    if (on_transmission_) {
        on_transmission_(sender, cmd);
    }
    Transmission t{sender, std::nullopt, engine_.now()};
    std::shared_ptr<const Bytes> payload;
    if (const auto* send = std::get_if<SendMessage>(&cmd)) {
        t.target = send->target;
        payload = std::make_shared<const Bytes>(send->payload);
    } else {
        payload = std::make_shared<const Bytes>(std::get<BroadcastMessage>(cmd).payload);
    }

    std::vector<NodePosition> snapshot;
    snapshot.reserve(nodes_.size());
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
        snapshot.push_back(NodePosition{NodeId{i}, position_at(nodes_[i]->motion, engine_.now())});
    }
    const auto deliveries = medium_.transmit(t, snapshot, engine_.rng());

    const MediumConfig& mc = medium_.config();
    if (!mc.collision_model) {
        for (const Delivery& d : deliveries) {
            const NodeId to = d.recipient;
            engine_.schedule(d.arrival, [this, to, payload] { deliver(to, payload); },
                             EventKind::delivery, to);
        }
        return;
    }

    // Reception completes when the occupancy window closes; only then is
    // every potentially overlapping window known.
    const SimTime duration = SimTime::from_seconds(mc.transmission_duration);
    record(sender).own_transmissions.push_back(engine_.now());
    for (const Delivery& d : deliveries) {
        const NodeId to = d.recipient;
        const std::uint64_t rid = next_reception_id_++;
        const SimTime arrival = d.arrival;
        record(to).receptions.push_back(Reception{arrival, rid});
        engine_.schedule(arrival + duration,
                         [this, to, rid, arrival, payload] {
                             finish_reception(to, rid, arrival, payload);
                         },
                         EventKind::delivery, to);
    }
}

void Simulation::finish_reception(NodeId receiver, std::uint64_t reception_id, SimTime arrival,
                                  const std::shared_ptr<const Bytes>& payload) {
    NodeRecord& rec = record(receiver);
    const std::int64_t d = SimTime::from_seconds(medium_.config().transmission_duration).nanos();

    // Receptions finish in arrival order, so windows that ended before this
    // one started cannot matter to it or to any later one.
    auto stale = [&](SimTime t) { return t.nanos() <= arrival.nanos() - d; };
    std::erase_if(rec.receptions, [&](const Reception& r) { return stale(r.arrival); });
    while (!rec.own_transmissions.empty() && stale(rec.own_transmissions.front())) {
        rec.own_transmissions.pop_front();
    }

    std::vector<SimTime> arrivals;
    std::size_t self = 0;
    arrivals.reserve(rec.receptions.size());
    for (std::size_t i = 0; i < rec.receptions.size(); ++i) {
        if (rec.receptions[i].id == reception_id) {
            self = i;
        }
        arrivals.push_back(rec.receptions[i].arrival);
    }
    const std::vector<SimTime> own(rec.own_transmissions.begin(), rec.own_transmissions.end());
    const auto survivors =
        resolve_collisions(arrivals, SimTime::from_nanos(d), own);
    if (std::binary_search(survivors.begin(), survivors.end(), self)) {
        deliver(receiver, payload);
    }
}

void Simulation::deliver(NodeId receiver, const std::shared_ptr<const Bytes>& payload) {
    Node& node = *record(receiver).node;
    if (!node.active()) {
        return;
    }
    if (on_delivery_) {
        on_delivery_(receiver, *payload);
    }
    node.deliver_message(*payload);
}

}  // namespace swarmsim
