#include <gtest/gtest.h>

#include <vector>

#include "swarmsim/mock_environment.hpp"
#include "swarmsim/plugins/mission.hpp"
#include "swarmsim/plugins/random_mobility.hpp"
#include "swarmsim/simulation.hpp"

namespace swarmsim::plugins {
namespace {

/// Hosts plugins inside a protocol so they run with a real provider.
class Host : public Protocol {
public:
    std::function<void(Provider&)> init;
    std::function<void(Provider&, const Telemetry&)> telemetry;
    std::function<void(Provider&)> poke;

    void on_initialize() override {
        if (init) {
            init(provider());
        }
    }
    void on_message_received(std::span<const std::uint8_t>) override {}
    void on_timer_fired(const TimerTag&) override {
        if (poke) {
            poke(provider());
        }
    }
    void on_telemetry(const Telemetry& t) override {
        if (telemetry) {
            telemetry(provider(), t);
        }
    }
    void on_finish() override {}
};

Position goto_target(const MockEncapsulator::IssuedMove& m) {
    return std::get<GotoCoords>(m.command).target;
}

struct MissionRig {
    explicit MissionRig(std::vector<Position> wps, LoopPolicy policy = LoopPolicy::reverse_at_ends,
                        std::optional<Position> current = std::nullopt)
        : mission(policy) {
        host.init = [this, wps, current](Provider& p) { mission.start(wps, p, current); };
        host.telemetry = [this](Provider& p, const Telemetry& t) { mission.on_telemetry(t.current_position, p); };
        node = &net.add(host);
        net.initialize_all();
    }

    void at(Position p) { net.telemetry(node->own_id(), p); }
    void call(std::function<void(Provider&)> f) {
        host.poke = std::move(f);
        node->deliver_timer(TimerTag{"poke"});
    }

    Mission mission;
    Host host;
    MockNetwork net;
    MockEncapsulator* node = nullptr;
};

const std::vector<Position> three{{0, 0, 0}, {100, 0, 0}, {200, 0, 0}};

TEST(MissionTest, SingleWaypointAtStartIsComplete) {
    MissionRig r({{0, 0, 0}}, LoopPolicy::reverse_at_ends, Position{0, 0, 0});
    EXPECT_TRUE(r.mission.complete());
}

TEST(MissionTest, StopPolicyGoesQuietAfterLastWaypoint) {
    MissionRig r(three, LoopPolicy::stop);
    for (const auto& w : three) {
        r.at(w);
    }
    EXPECT_TRUE(r.mission.complete());
    const auto issued = r.node->moves().size();
    r.at(three.back());
    r.at(three.front());
    EXPECT_EQ(r.node->moves().size(), issued);
    EXPECT_EQ(goto_target(r.node->moves().back()).x, 200.0);
}

TEST(MissionTest, ReverseAtEndsIndexSequence) {
    MissionRig r(three);
    std::vector<std::size_t> seq{r.mission.current_index()};
    for (int i = 0; i < 6; ++i) {
        r.at(three[r.mission.current_index()]);
        seq.push_back(r.mission.current_index());
    }
    EXPECT_EQ(seq, (std::vector<std::size_t>{0, 1, 2, 1, 0, 1, 2}));
    // Each step issued a GOTO toward the new index.
    EXPECT_EQ(r.node->moves().size(), 7u);
}

TEST(MissionTest, ArrivalNeedsTolerance) {
    MissionRig r(three);
    r.at({0.6, 0, 0});
    EXPECT_EQ(r.mission.current_index(), 0u);
    r.at({0.5, 0, 0});
    EXPECT_EQ(r.mission.current_index(), 1u);
    // One waypoint per update even when standing on the next one too.
    r.at({100, 0, 0});
    EXPECT_EQ(r.mission.current_index(), 2u);
}

TEST(MissionTest, ReverseMidLeg) {
    MissionRig r(three);
    r.at(three[0]);
    r.at(three[1]);  // forward, between 1 and 2
    ASSERT_EQ(r.mission.current_index(), 2u);
    r.call([&](Provider& p) { r.mission.reverse(p); });
    EXPECT_EQ(r.mission.direction(), Direction::reverse);
    EXPECT_EQ(r.mission.current_index(), 1u);
    EXPECT_EQ(goto_target(r.node->moves().back()).x, 100.0);
    r.call([&](Provider& p) { r.mission.reverse(p); });
    EXPECT_EQ(r.mission.direction(), Direction::forward);
    EXPECT_EQ(r.mission.current_index(), 2u);
}

TEST(MissionTest, ReverseWhileHeadingToStart) {
    MissionRig r(three);
    r.at(three[0]);
    r.at(three[1]);
    r.at(three[2]);  // turns: reverse toward 1
    r.at(three[1]);  // reverse toward 0
    ASSERT_EQ(r.mission.direction(), Direction::reverse);
    ASSERT_EQ(r.mission.current_index(), 0u);
    r.call([&](Provider& p) { r.mission.reverse(p); });
    EXPECT_EQ(r.mission.direction(), Direction::forward);
    EXPECT_EQ(r.mission.current_index(), 1u);
}

TEST(MissionTest, ProgressIsFractionalIndex) {
    MissionRig r(three);
    r.at(three[0]);
    EXPECT_DOUBLE_EQ(r.mission.progress({25, 0, 0}), 0.25);
    r.at(three[1]);
    EXPECT_DOUBLE_EQ(r.mission.progress({140, 0, 0}), 1.4);
    r.call([&](Provider& p) { r.mission.reverse(p); });
    EXPECT_DOUBLE_EQ(r.mission.progress({140, 0, 0}), 1.4);
}

TEST(MissionTest, MisuseErrors) {
    Mission m;
    MockNetwork net;
    Host host;
    host.init = [&](Provider& p) {
        EXPECT_THROW(m.reverse(p), MissionNotStarted);
        EXPECT_THROW(m.start({}, p), EmptyMission);
    };
    net.add(host);
    net.initialize_all();
}

TEST(RandomMobilityTest, RejectsDegenerateBounds) {
    EXPECT_THROW(RandomMobility(Bounds{{0, 0, 0}, {0, 0, 0}}), std::invalid_argument);
    EXPECT_THROW(RandomMobility(Bounds{{10, 0, 0}, {0, 10, 0}}), std::invalid_argument);
    EXPECT_NO_THROW(RandomMobility(Bounds{{0, 0, 0}, {10, 10, 0}}));
}

std::vector<Position> draw_targets(std::uint64_t seed, const Bounds& b, int n) {
    MockNetwork net(seed);
    Host host;
    RandomMobility rm(b);
    std::vector<Position> out;
    host.init = [&](Provider& p) {
        for (int i = 0; i < n; ++i) {
            out.push_back(rm.step(p));
        }
    };
    net.add(host);
    net.initialize_all();
    return out;
}

TEST(RandomMobilityTest, UniformTargetsInsideBox) {
    const Bounds b{{0, 100, 0}, {200, 300, 50}};
    const auto t = draw_targets(21, b, 10000);
    Position mean;
    for (const auto& p : t) {
        ASSERT_TRUE(b.contains(p));
        mean = mean + p * (1.0 / static_cast<double>(t.size()));
    }
    const Position c = b.center();
    EXPECT_NEAR(mean.x, c.x, 0.02 * c.x);
    EXPECT_NEAR(mean.y, c.y, 0.02 * c.y);
    EXPECT_NEAR(mean.z, c.z, 0.02 * c.z);
}

TEST(RandomMobilityTest, SeedDeterminesSequence) {
    const Bounds b{{0, 0, 0}, {10, 10, 10}};
    const auto a = draw_targets(3, b, 50);
    const auto c = draw_targets(3, b, 50);
    const auto d = draw_targets(4, b, 50);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(a[i].x, c[i].x);
        ASSERT_EQ(a[i].y, c[i].y);
        ASSERT_EQ(a[i].z, c[i].z);
    }
    EXPECT_NE(a[0].x, d[0].x);
}

TEST(RandomMobilityTest, NewTargetOnArrivalOnly) {
    MockNetwork net(1);
    Host host;
    RandomMobility rm(Bounds{{0, 0, 0}, {10, 10, 0}});
    host.init = [&](Provider& p) { rm.start(p); };
    host.telemetry = [&](Provider& p, const Telemetry& t) { rm.on_telemetry(t.current_position, p); };
    auto& node = net.add(host);
    net.initialize_all();
    ASSERT_EQ(node.moves().size(), 1u);
    net.telemetry(node.own_id(), Position{-5, -5, 0});
    EXPECT_EQ(node.moves().size(), 1u);
    net.telemetry(node.own_id(), *rm.target());
    EXPECT_EQ(node.moves().size(), 2u);
}

TEST(FollowerTest, OffsetIsAdded) {
    MockNetwork net;
    Host host;
    Follower f(Position{0, 5, 0});
    host.init = [&](Provider& p) { f.update(Position{10, 0, 0}, p); };
    auto& node = net.add(host);
    net.initialize_all();
    ASSERT_EQ(node.moves().size(), 1u);
    const Position t = goto_target(node.moves()[0]);
    EXPECT_EQ(t.x, 10.0);
    EXPECT_EQ(t.y, 5.0);
    EXPECT_EQ(t.z, 0.0);
}

TEST(FollowerTest, ReachesStationaryLeaderInDistanceOverSpeed) {
    Simulation sim(SimulationConfig{});
    const Position leader{100, 0, 0};
    auto host = std::make_unique<Host>();
    Follower f;
    host->init = [&](Provider& p) { f.update(leader, p); };
    host->telemetry = [&](Provider& p, const Telemetry&) { f.update(leader, p); };
    sim.add_node(std::move(host), NodeOptions{Position{}, SimTime::zero(), 10.0, "follower"});
    sim.run_until(SimTime::from_seconds(10));
    EXPECT_LE(distance(sim.position_of(NodeId{0}), leader), 0.5);
    sim.run_until(SimTime::from_seconds(30));
    EXPECT_EQ(distance(sim.position_of(NodeId{0}), leader), 0.0);
}

}  // namespace
}  // namespace swarmsim::plugins
