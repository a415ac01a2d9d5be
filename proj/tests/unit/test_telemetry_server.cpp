#include <gtest/gtest.h>

#include <chrono>
#include <memory>
#include <sstream>
#include <thread>

#include <boost/asio/ip/tcp.hpp>
#include <nlohmann/json.hpp>

#include "swarmsim/harness/experiment.hpp"
#include "swarmsim/harness/telemetry_server.hpp"
#include "ws_client.hpp"

namespace swarmsim::harness {
namespace {

using swarmsim::testing::WsClient;
using namespace std::chrono_literals;

std::string frame_text(int i) {
    return R"({"type":"frame","simulation_time":)" + std::to_string(i) +
           R"(,"nodes":[],"tracked_variables":{}})";
}

double frame_time(const std::string& text) {
    return nlohmann::json::parse(text)["simulation_time"].get<double>();
}

TEST(TelemetryServerTest, EveryClientGetsEveryFrameInOrder) {
    TelemetryServer server(0);
    ASSERT_NE(server.port(), 0);
    WsClient a(server.port());
    WsClient b(server.port());
    ASSERT_TRUE(server.wait_for_clients(2, 5s));
    for (int i = 0; i < 50; ++i) {
        server.publish_text(frame_text(i));
    }
    for (WsClient* c : {&a, &b}) {
        for (int i = 0; i < 50; ++i) {
            const auto msg = c->read();
            ASSERT_TRUE(msg);
            ASSERT_EQ(frame_time(*msg), i);
        }
    }
    server.stop();
    EXPECT_FALSE(a.read());
    EXPECT_EQ(server.frames_dropped(), 0u);
}

TEST(TelemetryServerTest, BusyPortIsReported) {
    TelemetryServer first(0);
    EXPECT_THROW(TelemetryServer second(first.port()), PortInUse);
}

TEST(TelemetryServerTest, NoClientsDoesNotBlock) {
    TelemetryServer server(0);
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < 10000; ++i) {
        server.publish_text(frame_text(i));
    }
    EXPECT_LT(std::chrono::steady_clock::now() - start, 2s);
    EXPECT_EQ(server.client_count(), 0u);
    EXPECT_FALSE(server.wait_for_clients(1, 10ms));
}

TEST(TelemetryServerTest, ClientLeavingMidStreamIsHarmless) {
    TelemetryServer server(0);
    WsClient stays(server.port());
    {
        auto leaves = std::make_unique<WsClient>(server.port());
        ASSERT_TRUE(server.wait_for_clients(2, 5s));
        server.publish_text(frame_text(0));
        ASSERT_TRUE(leaves->read());
        leaves.reset();  // socket torn down without a close handshake
    }
    for (int i = 1; i < 200; ++i) {
        server.publish_text(frame_text(i));
    }
    for (int i = 0; i < 200; ++i) {
        const auto msg = stays.read();
        ASSERT_TRUE(msg);
        ASSERT_EQ(frame_time(*msg), i);
    }
    const auto deadline = std::chrono::steady_clock::now() + 5s;
    while (server.client_count() != 1 && std::chrono::steady_clock::now() < deadline) {
        server.publish_text(frame_text(0));
        std::this_thread::sleep_for(10ms);
    }
    EXPECT_EQ(server.client_count(), 1u);
}

TEST(TelemetryServerTest, LateClientStartsAtTheCurrentFrame) {
    TelemetryServer server(0);
    for (int i = 0; i < 5; ++i) {
        server.publish_text(frame_text(i));
    }
    WsClient late(server.port());
    ASSERT_TRUE(server.wait_for_clients(1, 5s));
    for (int i = 5; i < 10; ++i) {
        server.publish_text(frame_text(i));
    }
    for (int i = 5; i < 10; ++i) {
        const auto msg = late.read();
        ASSERT_TRUE(msg);
        EXPECT_EQ(frame_time(*msg), i);
    }
}

TEST(TelemetryServerTest, NonWebSocketPeerIsDropped) {
    TelemetryServer server(0);
    {
        boost::asio::io_context ioc;
        boost::asio::ip::tcp::socket raw(ioc);
        raw.connect({boost::asio::ip::make_address("127.0.0.1"), server.port()});
        const std::string junk = "hello\r\n\r\n";
        boost::asio::write(raw, boost::asio::buffer(junk));
    }
    WsClient ok(server.port());
    ASSERT_TRUE(server.wait_for_clients(1, 5s));
    server.publish_text(frame_text(1));
    const auto msg = ok.read();
    ASSERT_TRUE(msg);
    EXPECT_EQ(frame_time(*msg), 1);
}

TEST(TelemetryServerTest, LiveRunStreamsSchemaValidFrames) {
    ScenarioConfig c = preset_config("small");
    c.duration = SimTime::from_seconds(120);

    TelemetryServer server(0);
    WsClient client(server.port());
    ASSERT_TRUE(server.wait_for_clients(1, 5s));
    RunOptions o;
    o.sink = &server;
    const RunResult watched = run_single(c, 0, o);
    server.stop();

    int frames = 0;
    double last = -1.0;
    while (const auto msg = client.read()) {
        ASSERT_TRUE(frame_schema_problems(*msg).empty()) << *msg;
        const double t = frame_time(*msg);
        EXPECT_GT(t, last);
        last = t;
        ++frames;
    }
    EXPECT_EQ(frames, 121);
    EXPECT_EQ(last, 120.0);

    const RunResult alone = run_single(c, 0);
    ASSERT_EQ(watched.series.samples.size(), alone.series.samples.size());
    for (std::size_t k = 0; k < alone.series.samples.size(); ++k) {
        ASSERT_EQ(watched.series.samples[k].gs_collected, alone.series.samples[k].gs_collected);
    }
}

}  // namespace
}  // namespace swarmsim::harness
