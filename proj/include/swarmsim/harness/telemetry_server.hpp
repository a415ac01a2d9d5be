#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "swarmsim/harness/telemetry.hpp"

namespace swarmsim::harness {

class PortInUse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Local WebSocket endpoint streaming frames as UTF-8 JSON text messages.
///
/// Watch-only: anything clients send is ignored. Each client has its own
/// bounded queue fed by publish(); when a client falls behind, frames
/// destined for it are dropped rather than stalling the simulation.
class TelemetryServer final : public FrameSink {
public:
    /// Binds 127.0.0.1:@p port (0 picks a free port) and starts accepting.
    /// @throws PortInUse if the port cannot be bound.
    explicit TelemetryServer(std::uint16_t port, std::size_t queue_capacity = 4096);
    ~TelemetryServer() override;

    TelemetryServer(const TelemetryServer&) = delete;
    TelemetryServer& operator=(const TelemetryServer&) = delete;

    [[nodiscard]] std::uint16_t port() const noexcept { return port_; }

    void publish(const TelemetryFrame& frame) override;
    void publish_text(std::string text);

    /// Clients that completed the handshake and have not gone away.
    [[nodiscard]] std::size_t client_count() const;

    bool wait_for_clients(std::size_t n, std::chrono::milliseconds timeout);

    [[nodiscard]] std::uint64_t frames_dropped() const noexcept { return dropped_.load(); }

    /// Flushes queued frames (bounded wait), closes every client, stops
    /// accepting. Idempotent.
    void stop();

private:
    struct Impl;
    struct Session;

    void accept_loop();
    void run_session(const std::shared_ptr<Session>& s);

    std::unique_ptr<Impl> impl_;
    std::uint16_t port_ = 0;
    std::size_t capacity_;
    std::atomic<bool> stopping_{false};
    std::atomic<std::uint64_t> dropped_{0};
    mutable std::mutex mutex_;
    std::condition_variable clients_changed_;
    std::vector<std::shared_ptr<Session>> sessions_;
    std::thread acceptor_thread_;
};

}  // namespace swarmsim::harness
