#include "swarmsim/harness/telemetry_server.hpp"

#include <deque>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace swarmsim::harness {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

struct TelemetryServer::Impl {
    asio::io_context ioc;
    tcp::acceptor acceptor{ioc};

    void do_accept(TelemetryServer& server);
};

struct TelemetryServer::Session {
    explicit Session(tcp::socket socket) : ws(std::move(socket)) {}

    websocket::stream<tcp::socket> ws;
    std::mutex m;
    std::condition_variable cv;
    std::deque<std::shared_ptr<const std::string>> queue;
    bool open = false;
    bool stop = false;
    std::atomic<bool> done{false};
    std::thread thread;
};

void TelemetryServer::Impl::do_accept(TelemetryServer& server) {
    acceptor.async_accept([this, &server](boost::system::error_code ec, tcp::socket socket) {
        if (ec || server.stopping_) {
            return;
        }
        auto session = std::make_shared<Session>(std::move(socket));
        {
            std::lock_guard lk(server.mutex_);
            server.sessions_.push_back(session);
        }
        session->thread = std::thread([&server, session] { server.run_session(session); });
        do_accept(server);
    });
}

TelemetryServer::TelemetryServer(std::uint16_t port, std::size_t queue_capacity)
    : impl_(std::make_unique<Impl>()), capacity_(queue_capacity) {
    boost::system::error_code ec;
    const tcp::endpoint endpoint(asio::ip::make_address("127.0.0.1"), port);
    impl_->acceptor.open(endpoint.protocol(), ec);
    if (!ec) {
        impl_->acceptor.set_option(asio::socket_base::reuse_address(true), ec);
    }
    if (!ec) {
        impl_->acceptor.bind(endpoint, ec);
    }
    if (!ec) {
        impl_->acceptor.listen(asio::socket_base::max_listen_connections, ec);
    }
    if (ec) {
        throw PortInUse("cannot listen on port " + std::to_string(port) + ": " + ec.message());
    }
    port_ = impl_->acceptor.local_endpoint().port();
    impl_->do_accept(*this);
    acceptor_thread_ = std::thread([this] { impl_->ioc.run(); });
}

TelemetryServer::~TelemetryServer() {
    stop();
}

void TelemetryServer::run_session(const std::shared_ptr<Session>& s) {
    boost::system::error_code ec;
    s->ws.set_option(websocket::stream_base::decorator([](websocket::response_type& res) {
        res.set(beast::http::field::server, "swarmsim-telemetry");
    }));
    s->ws.accept(ec);
    if (!ec) {
        {
            std::lock_guard lk(s->m);
            s->open = true;
        }
        clients_changed_.notify_all();
        s->ws.text(true);
        for (;;) {
            std::unique_lock lk(s->m);
            s->cv.wait(lk, [&] { return !s->queue.empty() || s->stop; });
            if (s->queue.empty()) {
                break;  // stop requested and drained
            }
            auto msg = std::move(s->queue.front());
            s->queue.pop_front();
            lk.unlock();
            s->ws.write(asio::buffer(*msg), ec);
            if (ec) {
                break;  // client went away
            }
        }
        if (!ec) {
            s->ws.close(websocket::close_code::normal, ec);
        }
    }
    {
        std::lock_guard lk(s->m);
        s->open = false;
        s->queue.clear();
    }
    s->done = true;
    clients_changed_.notify_all();
}

void TelemetryServer::publish(const TelemetryFrame& frame) {
    publish_text(to_json_text(frame));
}

void TelemetryServer::publish_text(std::string text) {
    auto msg = std::make_shared<const std::string>(std::move(text));
    std::lock_guard lk(mutex_);
    for (const auto& s : sessions_) {
        std::lock_guard slk(s->m);
        if (!s->open || s->stop) {
            continue;
        }
        if (s->queue.size() >= capacity_) {
            ++dropped_;
            continue;
        }
        s->queue.push_back(msg);
        s->cv.notify_one();
    }
}

std::size_t TelemetryServer::client_count() const {
    std::lock_guard lk(mutex_);
    std::size_t n = 0;
    for (const auto& s : sessions_) {
        std::lock_guard slk(s->m);
        n += s->open ? 1 : 0;
    }
    return n;
}

bool TelemetryServer::wait_for_clients(std::size_t n, std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    std::unique_lock lk(mutex_);
    return clients_changed_.wait_until(lk, deadline, [&] {
        std::size_t open = 0;
        for (const auto& s : sessions_) {
            std::lock_guard slk(s->m);
            open += s->open ? 1 : 0;
        }
        return open >= n;
    });
}

void TelemetryServer::stop() {
    if (stopping_.exchange(true)) {
        return;
    }
    asio::post(impl_->ioc, [this] {
        boost::system::error_code ec;
        impl_->acceptor.close(ec);
    });
    impl_->ioc.stop();
    if (acceptor_thread_.joinable()) {
        acceptor_thread_.join();
    }

    std::vector<std::shared_ptr<Session>> sessions;
    {
        std::lock_guard lk(mutex_);
        sessions = sessions_;
    }
    for (const auto& s : sessions) {
        std::lock_guard slk(s->m);
        s->stop = true;
        s->cv.notify_one();
    }
    // Give clients a moment to drain, then cut anyone still blocked.
    {
        std::unique_lock lk(mutex_);
        clients_changed_.wait_for(lk, std::chrono::seconds(2), [&] {
            return std::all_of(sessions.begin(), sessions.end(),
                               [](const auto& s) { return s->done.load(); });
        });
    }
    for (const auto& s : sessions) {
        if (!s->done) {
            boost::system::error_code ec;
            s->ws.next_layer().shutdown(tcp::socket::shutdown_both, ec);
        }
    }
    for (const auto& s : sessions) {
        if (s->thread.joinable()) {
            s->thread.join();
        }
    }
}

}  // namespace swarmsim::harness
