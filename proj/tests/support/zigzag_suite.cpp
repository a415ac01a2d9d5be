#include "zigzag_suite.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include "swarmsim/mock_environment.hpp"
#include "swarmsim/simulation.hpp"
#include "swarmsim/zigzag/message.hpp"

namespace swarmsim::testing {

namespace {

using zigzag::Message;
using zigzag::MessageKind;

class Feeder final : public Protocol {
public:
    Feeder(NodeId target, std::uint64_t count) : target_(target), count_(count) {}

    void on_initialize() override {
        Message m;
        m.kind = MessageKind::sensor_data;
        m.sender = provider().own_id();
        m.sender_role = zigzag::Role::sensor;
        m.data_count = 1;
        for (std::uint64_t i = 0; i < count_; ++i) {
            provider().send_command(CommunicationCommand{SendMessage{target_, zigzag::encode(m)}});
        }
    }
    void on_message_received(std::span<const std::uint8_t>) override {}
    void on_timer_fired(const TimerTag&) override {}
    void on_telemetry(const Telemetry&) override {}
    void on_finish() override {}

private:
    NodeId target_;
    std::uint64_t count_;
};

std::optional<ObservedPairing> as_pairing(SimTime at, NodeId sender, const CommunicationCommand& cmd) {
    const auto* send = std::get_if<SendMessage>(&cmd);
    if (send == nullptr) {
        return std::nullopt;
    }
    const auto m = zigzag::decode(send->payload);
    if (!m || m->kind != MessageKind::pair_confirm) {
        return std::nullopt;
    }
    return ObservedPairing{at, sender, send->target};
}

double lookup_number(const TrackedVariables& vars, const std::string& name) {
    const auto it = vars.find(name);
    if (it == vars.end() || !std::holds_alternative<double>(it->second)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::get<double>(it->second);
}

std::string lookup_text(const TrackedVariables& vars, const std::string& name) {
    const auto it = vars.find(name);
    if (it == vars.end() || !std::holds_alternative<std::string>(it->second)) {
        return "<missing>";
    }
    return std::get<std::string>(it->second);
}

zigzag::UavConfig stationary(const zigzag::Params& params, Position at) {
    zigzag::UavConfig c;
    c.mission = {at};
    c.params = params;
    c.initial_position = at;
    return c;
}

// Same radio range as the default medium; the mock enforces it with a
// drop filter since its nodes never move.
constexpr double world_range = 50.0;

class MockWorld final : public World {
public:
    explicit MockWorld(std::uint64_t seed) : net_(seed) {
        net_.set_drop_filter([this](NodeId from, NodeId to, std::span<const std::uint8_t>) {
            return distance(positions_[from.value], positions_[to.value]) > world_range;
        });
    }

    NodeId add_ground_station(const zigzag::Params& params, Position at) override {
        return keep(std::make_unique<zigzag::GroundStationProtocol>(params), at);
    }
    NodeId add_uav(const zigzag::Params& params, Position at) override {
        return keep(std::make_unique<zigzag::UavProtocol>(stationary(params, at)), at);
    }
    NodeId add_feeder(NodeId target, std::uint64_t count, Position at) override {
        return keep(std::make_unique<Feeder>(target, count), at);
    }

    void run_until(double seconds) override {
        if (!started_) {
            net_.initialize_all();
            started_ = true;
        }
        net_.advance_to(SimTime::from_seconds(seconds));
    }

    double number(NodeId id, const std::string& name) const override {
        return lookup_number(const_cast<MockNetwork&>(net_).node(id).tracked_variables(), name);
    }
    std::string text(NodeId id, const std::string& name) const override {
        return lookup_text(const_cast<MockNetwork&>(net_).node(id).tracked_variables(), name);
    }
    std::vector<ObservedPairing> pairings() const override {
        std::vector<ObservedPairing> out;
        auto& net = const_cast<MockNetwork&>(net_);
        for (std::uint32_t i = 0; i < net.size(); ++i) {
            for (const auto& s : net.node(NodeId{i}).sent()) {
                if (auto p = as_pairing(s.at, NodeId{i}, s.command)) {
                    out.push_back(*p);
                }
            }
        }
        std::stable_sort(out.begin(), out.end(),
                         [](const auto& a, const auto& b) { return a.at < b.at; });
        return out;
    }
    std::string name() const override { return "mock"; }

private:
    NodeId keep(std::unique_ptr<Protocol> p, Position at) {
        const NodeId id = net_.add(*p).own_id();
        protocols_.push_back(std::move(p));
        positions_.push_back(at);
        return id;
    }

    std::vector<std::unique_ptr<Protocol>> protocols_;  // outlive net_'s nodes
    std::vector<Position> positions_;
    MockNetwork net_;
    bool started_ = false;
};

class EngineWorld final : public World {
public:
    explicit EngineWorld(std::uint64_t seed) : sim_(config(seed)) {
        sim_.set_transmission_observer([this](NodeId sender, const CommunicationCommand& cmd) {
            if (auto p = as_pairing(sim_.now(), sender, cmd)) {
                pairings_.push_back(*p);
            }
        });
    }

    NodeId add_ground_station(const zigzag::Params& params, Position at) override {
        return sim_.add_node(std::make_unique<zigzag::GroundStationProtocol>(params),
                             NodeOptions{at, SimTime::zero(), default_speed, "ground_station"});
    }
    NodeId add_uav(const zigzag::Params& params, Position at) override {
        return sim_.add_node(std::make_unique<zigzag::UavProtocol>(stationary(params, at)),
                             NodeOptions{at, SimTime::zero(), default_speed, "uav"});
    }
    NodeId add_feeder(NodeId target, std::uint64_t count, Position at) override {
        return sim_.add_node(std::make_unique<Feeder>(target, count),
                             NodeOptions{at, SimTime::zero(), default_speed, "sensor"});
    }

    void run_until(double seconds) override { sim_.run_until(SimTime::from_seconds(seconds)); }

    double number(NodeId id, const std::string& name) const override {
        return lookup_number(sim_.tracked_variables(id), name);
    }
    std::string text(NodeId id, const std::string& name) const override {
        return lookup_text(sim_.tracked_variables(id), name);
    }
    std::vector<ObservedPairing> pairings() const override { return pairings_; }
    std::string name() const override { return "engine"; }

private:
    static SimulationConfig config(std::uint64_t seed) {
        SimulationConfig c;
        c.seed = seed;
        return c;
    }

    Simulation sim_;
    std::vector<ObservedPairing> pairings_;
};

class Expect {
public:
    void number(const World& w, NodeId id, const std::string& var, double want) {
        const double got = w.number(id, var);
        if (got != want) {
            std::ostringstream os;
            os << w.name() << ": node " << id.value << " " << var << " = " << got << ", want "
               << want;
            failures.push_back(os.str());
        }
    }
    void text(const World& w, NodeId id, const std::string& var, const std::string& want) {
        const std::string got = w.text(id, var);
        if (got != want) {
            failures.push_back(w.name() + ": node " + std::to_string(id.value) + " " + var +
                               " = " + got + ", want " + want);
        }
    }
    void that(bool ok, const std::string& what) {
        if (!ok) {
            failures.push_back(what);
        }
    }

    std::vector<std::string> failures;
};

const Position here{10.0, 0.0, 0.0};

std::vector<SuiteCase> build_suite() {
    std::vector<SuiteCase> s;

    s.push_back({"equal progress: smaller id carries everything home", [](World& w) {
                     const zigzag::Params p;
                     const NodeId a = w.add_uav(p, here);
                     const NodeId b = w.add_uav(p, here);
                     w.add_feeder(a, 3, here);
                     w.add_feeder(b, 5, here);
                     w.run_until(2.0);
                     Expect e;
                     e.number(w, a, "data_count", 8);
                     e.text(w, a, "direction", "reverse");
                     e.number(w, b, "data_count", 0);
                     e.text(w, b, "direction", "forward");
                     e.that(w.pairings().size() == 1,
                            w.name() + ": expected exactly one pairing, saw " +
                                std::to_string(w.pairings().size()));
                     return e.failures;
                 }});

    s.push_back({"empty pair still splits directions", [](World& w) {
                     const zigzag::Params p;
                     const NodeId a = w.add_uav(p, here);
                     const NodeId b = w.add_uav(p, here);
                     w.run_until(2.0);
                     Expect e;
                     e.number(w, a, "data_count", 0);
                     e.number(w, b, "data_count", 0);
                     e.that(w.text(a, "direction") != w.text(b, "direction"),
                            w.name() + ": both UAVs kept the same direction");
                     return e.failures;
                 }});

    s.push_back({"ground station takes a UAV's load", [](World& w) {
                     const zigzag::Params p;
                     const NodeId gs = w.add_ground_station(p, here);
                     const NodeId u = w.add_uav(p, here);
                     w.add_feeder(u, 8, here);
                     w.run_until(2.0);
                     Expect e;
                     e.number(w, gs, "collected", 8);
                     e.number(w, u, "data_count", 0);
                     e.text(w, u, "direction", "forward");
                     return e.failures;
                 }});

    s.push_back({"ground station accumulates two UAVs", [](World& w) {
                     // Both in range of the GS at once, out of range of each other.
                     const zigzag::Params p;
                     const Position west{-30, 0, 0};
                     const Position east{30, 0, 0};
                     const NodeId gs = w.add_ground_station(p, here);
                     const NodeId u1 = w.add_uav(p, west);
                     const NodeId u2 = w.add_uav(p, east);
                     w.add_feeder(u1, 10, west);
                     w.add_feeder(u2, 8, east);
                     w.run_until(30.0);
                     Expect e;
                     e.number(w, gs, "collected", 18);
                     e.number(w, u1, "data_count", 0);
                     e.number(w, u2, "data_count", 0);
                     return e.failures;
                 }});

    s.push_back({"interaction timeout spaces repeat pairings", [](World& w) {
                     zigzag::Params p;
                     p.interaction_timeout = 5.0;
                     w.add_uav(p, here);
                     w.add_uav(p, here);
                     w.run_until(60.0);
                     Expect e;
                     const auto pairs = w.pairings();
                     e.that(pairs.size() >= 5, w.name() + ": too few pairings to judge (" +
                                                   std::to_string(pairs.size()) + ")");
                     e.that(min_repeat_spacing(pairs) >= 5.0,
                            w.name() + ": repeat pairing closer than 5 s (" +
                                std::to_string(min_repeat_spacing(pairs)) + ")");
                     return e.failures;
                 }});

    s.push_back({"without the timeout UAVs re-pair immediately", [](World& w) {
                     zigzag::Params p;
                     p.interaction_timeout = 0.0;
                     w.add_uav(p, here);
                     w.add_uav(p, here);
                     w.run_until(10.0);
                     Expect e;
                     e.that(min_repeat_spacing(w.pairings()) < 5.0,
                            w.name() + ": expected an interaction loop with timeout 0");
                     e.that(w.pairings().size() >= 10,
                            w.name() + ": expected a pairing per heartbeat, saw " +
                                std::to_string(w.pairings().size()));
                     return e.failures;
                 }});

    return s;
}

}  // namespace

std::unique_ptr<World> make_mock_world(std::uint64_t seed) {
    return std::make_unique<MockWorld>(seed);
}

std::unique_ptr<World> make_engine_world(std::uint64_t seed) {
    return std::make_unique<EngineWorld>(seed);
}

const std::vector<SuiteCase>& zigzag_suite() {
    static const std::vector<SuiteCase> suite = build_suite();
    return suite;
}

double min_repeat_spacing(const std::vector<ObservedPairing>& pairings) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, SimTime> last;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pairings) {
        const auto key = std::minmax(p.responder.value, p.requester.value);
        const auto it = last.find(key);
        if (it != last.end()) {
            best = std::min(best, static_cast<double>((p.at - it->second).nanos()) / 1e9);
        }
        last[key] = p.at;
    }
    return best;
}

}  // namespace swarmsim::testing
