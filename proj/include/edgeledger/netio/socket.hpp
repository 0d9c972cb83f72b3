#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace edgeledger::netio {

class SocketError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Thin RAII wrapper over a connected TCP stream.
class Socket {
  public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    ~Socket();

    Socket(Socket&& other) noexcept;
    Socket& operator=(Socket&& other) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;

    // Connects with a deadline; throws SocketError on failure or timeout.
    static Socket connect(const std::string& host, std::uint16_t port,
                          std::chrono::milliseconds timeout);

    void send_all(std::string_view data);
    // Reads exactly n bytes. Returns false on clean EOF before any byte;
    // throws on error, timeout, or mid-read EOF.
    bool recv_exact(void* buf, std::size_t n);
    void set_recv_timeout(std::chrono::milliseconds timeout);

    bool valid() const { return fd_ >= 0; }
    void close();

  private:
    int fd_ = -1;
};

// Listening socket; accept() can be unblocked by stop-flag polling.
class Listener {
  public:
    Listener() = default;
    ~Listener();

    Listener(Listener&& other) noexcept;
    Listener& operator=(Listener&& other) noexcept;
    Listener(const Listener&) = delete;
    Listener& operator=(const Listener&) = delete;

    // Binds and listens; port 0 picks a free port. Throws SocketError.
    static Listener bind(const std::string& host, std::uint16_t port);

    std::uint16_t port() const { return port_; }

    // Waits up to the poll interval; nullopt when nothing arrived.
    std::optional<Socket> accept(std::chrono::milliseconds poll_interval);

    bool valid() const { return fd_ >= 0; }
    void close();

  private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

}  // namespace edgeledger::netio
