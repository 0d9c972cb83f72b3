#include "edgeledger/netio/echo.hpp"

#include "edgeledger/digest.hpp"
#include "edgeledger/log.hpp"

namespace edgeledger::netio {

std::string credential_token(std::string_view credential_ref) {
    return to_hex(sha256(credential_ref));
}

void write_frame(Socket& sock, std::string_view payload) {
    char len[4] = {static_cast<char>(payload.size() >> 24),
                   static_cast<char>(payload.size() >> 16),
                   static_cast<char>(payload.size() >> 8), static_cast<char>(payload.size())};
    sock.send_all(std::string_view(len, 4));
    sock.send_all(payload);
}

std::optional<std::string> read_frame(Socket& sock) {
    std::uint8_t len[4];
    if (!sock.recv_exact(len, 4)) return std::nullopt;
    std::size_t n = (std::size_t(len[0]) << 24) | (std::size_t(len[1]) << 16) |
                    (std::size_t(len[2]) << 8) | std::size_t(len[3]);
    if (n > kMaxFrameBytes) throw SocketError("frame too large");
    std::string payload(n, '\0');
    if (n > 0 && !sock.recv_exact(payload.data(), n)) throw SocketError("eof inside frame");
    return payload;
}

EchoServer::EchoServer(EchoServerOptions options) : options_(std::move(options)) {
    if (!options_.verify_token) {
        std::string expected = credential_token(options_.credential_ref);
        options_.verify_token = [expected](const std::string& token) {
            return token == expected;
        };
    }
    if (!options_.plan) options_.plan = [] { return ReplyPlan{}; };
}

EchoServer::~EchoServer() { stop(); }

void EchoServer::start() {
    listener_ = Listener::bind(options_.listen_host, options_.port);
    port_ = listener_.port();
    stop_.store(false);
    acceptor_ = std::thread([this] { accept_loop(); });
}

void EchoServer::stop() {
    stop_.store(true);
    if (acceptor_.joinable()) acceptor_.join();
    listener_.close();
    std::vector<std::thread> workers;
    {
        std::lock_guard<std::mutex> lock(workers_mu_);
        workers.swap(workers_);
    }
    for (auto& w : workers)
        if (w.joinable()) w.join();
}

std::string EchoServer::address() const {
    return options_.listen_host + ":" + std::to_string(port_);
}

void EchoServer::accept_loop() {
    using namespace std::chrono_literals;
    while (!stop_.load()) {
        auto sock = listener_.accept(100ms);
        if (!sock) continue;
        std::lock_guard<std::mutex> lock(workers_mu_);
        workers_.emplace_back(
            [this, s = std::make_shared<Socket>(std::move(*sock))]() mutable {
                serve_connection(std::move(*s));
            });
    }
}

void EchoServer::serve_connection(Socket sock) {
    using namespace std::chrono_literals;
    try {
        sock.set_recv_timeout(10s);
        auto token = read_frame(sock);
        if (!token) return;
        if (!options_.verify_token(*token)) {
            char reject = static_cast<char>(kAuthReject);
            sock.send_all({&reject, 1});
            return;
        }
        char accept = static_cast<char>(kAuthAccept);
        sock.send_all({&accept, 1});

        while (!stop_.load()) {
            auto frame = read_frame(sock);
            if (!frame) return;  // peer closed
            ReplyPlan plan = options_.plan();
            if (plan.delay.count() > 0) std::this_thread::sleep_for(plan.delay);
            switch (plan.action) {
                case ReplyPlan::Action::echo:
                    write_frame(sock, *frame);
                    break;
                case ReplyPlan::Action::corrupt:
                    write_frame(sock, "!" + *frame);
                    break;
                case ReplyPlan::Action::drop:
                    return;
            }
        }
    } catch (const SocketError& e) {
        log::debug("echo connection ended: ", e.what());
    }
}

}  // namespace edgeledger::netio
