#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "swarmsim/medium.hpp"

namespace swarmsim {
namespace {

SimTime s(double seconds) {
    return SimTime::from_seconds(seconds);
}

std::vector<NodePosition> line(std::initializer_list<double> xs) {
    std::vector<NodePosition> out;
    std::uint32_t id = 0;
    for (double x : xs) {
        out.push_back(NodePosition{NodeId{id++}, Position{x, 0, 0}});
    }
    return out;
}

TEST(RangeTest, BoundaryIsInclusive) {
    EXPECT_TRUE(in_range({0, 0, 0}, {30, 40, 0}, 50.0));
    EXPECT_FALSE(in_range({0, 0, 0}, {50.001, 0, 0}, 50.0));
    EXPECT_TRUE(in_range({7, 7, 7}, {7, 7, 7}, 0.0));
}

TEST(RangeTest, Symmetric) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> c(-100, 100);
    for (int i = 0; i < 2000; ++i) {
        const Position a{c(gen), c(gen), c(gen)};
        const Position b{c(gen), c(gen), c(gen)};
        const double r = std::abs(c(gen));
        ASSERT_EQ(in_range(a, b, r), in_range(b, a, r));
    }
}

TEST(MediumConfigTest, ProblemsNameTheField) {
    MediumConfig c;
    c.drop_probability = 1.5;
    c.range = -1;
    const auto p = c.problems();
    ASSERT_EQ(p.size(), 2u);
    EXPECT_NE(p[0].find("range"), std::string::npos);
    EXPECT_NE(p[1].find("drop_probability"), std::string::npos);
    EXPECT_THROW(Medium{c}, std::invalid_argument);
}

TEST(MediumTest, BroadcastReachesEveryoneInRangeButTheSender) {
    Medium m(MediumConfig{});
    Rng rng(1);
    const auto nodes = line({0, 10, 20, 30, 200});
    const auto d = m.transmit(Transmission{NodeId{0}, std::nullopt, s(2)}, nodes, rng);
    ASSERT_EQ(d.size(), 3u);
    for (const auto& x : d) {
        EXPECT_NE(x.recipient, NodeId{0});
        EXPECT_EQ(x.arrival, s(2));
    }
}

TEST(MediumTest, DelayIsAddedExactly) {
    MediumConfig c;
    c.delay = 0.25;
    Medium m(c);
    Rng rng(1);
    const auto d = m.transmit(Transmission{NodeId{0}, NodeId{1}, s(1)}, line({0, 5}), rng);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].arrival, s(1.25));
}

TEST(MediumTest, OutOfRangeUnicastVanishesSilently) {
    Medium m(MediumConfig{});
    Rng rng(1);
    EXPECT_TRUE(m.transmit(Transmission{NodeId{0}, NodeId{1}, s(0)}, line({0, 200}), rng).empty());
}

TEST(MediumTest, UnknownTargetThrows) {
    Medium m(MediumConfig{});
    Rng rng(1);
    EXPECT_THROW(m.transmit(Transmission{NodeId{0}, NodeId{9}, s(0)}, line({0, 1}), rng), UnknownTarget);
}

TEST(MediumTest, CertainDropLosesEverything) {
    MediumConfig c;
    c.drop_probability = 1.0;
    Medium m(c);
    Rng rng(1);
    EXPECT_TRUE(m.transmit(Transmission{NodeId{0}, std::nullopt, s(0)}, line({0, 1, 2, 3}), rng).empty());
}

TEST(MediumTest, OnlyInRangeRecipientsConsumeDraws) {
    MediumConfig c;
    c.drop_probability = 0.5;
    Medium m(c);
    Rng a(3);
    Rng b(3);
    (void)m.transmit(Transmission{NodeId{0}, std::nullopt, s(0)}, line({0, 1, 500, 2, 900}), a);
    b.uniform();
    b.uniform();
    EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(MediumTest, DropRateIsNearConfiguredProbability) {
    MediumConfig c;
    c.drop_probability = 0.3;
    Medium m(c);
    const auto nodes = line({0, 10});
    double mean = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        int delivered = 0;
        for (int i = 0; i < 10000; ++i) {
            delivered += static_cast<int>(
                m.transmit(Transmission{NodeId{0}, NodeId{1}, s(0)}, nodes, rng).size());
        }
        mean += delivered / 10000.0 / 10.0;
    }
    EXPECT_NEAR(mean, 0.70, 0.02);
}

TEST(CollisionTest, SimultaneousArrivalsBothLost) {
    const std::vector<SimTime> a{s(1), s(1)};
    EXPECT_TRUE(resolve_collisions(a, s(0.01)).empty());
}

TEST(CollisionTest, SeparatedArrivalsSurvive) {
    const std::vector<SimTime> a{s(1), s(1.02)};
    EXPECT_EQ(resolve_collisions(a, s(0.01)), (std::vector<std::size_t>{0, 1}));
}

TEST(CollisionTest, TouchingWindowsDoNotOverlap) {
    const std::vector<SimTime> a{s(1), s(1.01)};
    EXPECT_EQ(resolve_collisions(a, s(0.01)).size(), 2u);
}

TEST(CollisionTest, ThreePairwiseOverlapsAllLost) {
    const std::vector<SimTime> a{s(1), s(1.004), s(1.008)};
    EXPECT_TRUE(resolve_collisions(a, s(0.01)).empty());
}

TEST(CollisionTest, OwnTransmissionBlocksReception) {
    const std::vector<SimTime> a{s(1), s(3)};
    const std::vector<SimTime> own{s(1.005)};
    EXPECT_EQ(resolve_collisions(a, s(0.01), own), (std::vector<std::size_t>{1}));
}

TEST(CollisionTest, MatchesBruteForce) {
    std::mt19937_64 gen(8);
    std::uniform_int_distribution<std::int64_t> t(0, 200'000'000);
    std::uniform_int_distribution<int> n(0, 25);
    const std::int64_t d = 10'000'000;
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<std::int64_t> arr(n(gen));
        std::vector<std::int64_t> own(n(gen) / 5);
        for (auto& x : arr) {
            x = t(gen);
        }
        for (auto& x : own) {
            x = t(gen);
        }
        std::vector<SimTime> at;
        std::vector<SimTime> ot;
        for (auto x : arr) {
            at.push_back(SimTime::from_nanos(x));
        }
        for (auto x : own) {
            ot.push_back(SimTime::from_nanos(x));
        }
        ASSERT_EQ(resolve_collisions(at, SimTime::from_nanos(d), ot),
                  testing::brute_force_survivors(arr, d, own))
            << "trial " << trial;
    }
}

}  // namespace
}  // namespace swarmsim
