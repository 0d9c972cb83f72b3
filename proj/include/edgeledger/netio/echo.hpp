#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "edgeledger/netio/socket.hpp"

namespace edgeledger::netio {

// Echo wire protocol (bit-exact):
//   client -> server  auth frame: 4-byte big-endian length + token bytes
//   server -> client  1 byte: accept 0x01 / reject 0x00
//   both directions   echo frames: 4-byte big-endian length + payload
// The token is derived from the credential reference; both sides compute it
// the same way, so the secret itself never crosses the wire or the ledger.
inline constexpr std::uint8_t kAuthAccept = 0x01;
inline constexpr std::uint8_t kAuthReject = 0x00;
inline constexpr std::size_t kMaxFrameBytes = 64 * 1024;

std::string credential_token(std::string_view credential_ref);

void write_frame(Socket& sock, std::string_view payload);
// nullopt on clean EOF; throws SocketError on timeout/overflow/mid-frame EOF.
std::optional<std::string> read_frame(Socket& sock);

// What the server does with one echo frame. Link emulation plugs in here:
// delay is applied before the reply, corrupt flips the payload, drop closes
// the connection without replying.
struct ReplyPlan {
    std::chrono::milliseconds delay{0};
    enum class Action { echo, corrupt, drop } action = Action::echo;
};

struct EchoServerOptions {
    std::string listen_host = "127.0.0.1";
    std::uint16_t port = 0;  // 0 picks a free port
    std::string credential_ref;
    // Overrides credential_ref verification when set (multi-tenant listeners).
    std::function<bool(const std::string& token)> verify_token;
    // Called once per echo frame; defaults to an immediate faithful echo.
    std::function<ReplyPlan()> plan;
};

// Answers authenticated echo probes until stopped; one thread per connection.
class EchoServer {
  public:
    explicit EchoServer(EchoServerOptions options);
    ~EchoServer();

    EchoServer(const EchoServer&) = delete;
    EchoServer& operator=(const EchoServer&) = delete;

    // Binds and spawns the accept loop. Throws SocketError when the address
    // cannot be bound (bind failure is fatal by contract).
    void start();
    void stop();

    std::uint16_t port() const { return port_; }
    std::string address() const;

  private:
    void accept_loop();
    void serve_connection(Socket sock);

    EchoServerOptions options_;
    Listener listener_;
    std::uint16_t port_ = 0;
    std::atomic<bool> stop_{false};
    std::thread acceptor_;
    std::mutex workers_mu_;
    std::vector<std::thread> workers_;
};

}  // namespace edgeledger::netio
