#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "zkb/hash.hpp"

namespace zkb {

/// Typed message: one tag byte plus an opaque payload. On TCP the wire
/// encoding is a 4-byte LE length (covering tag + payload) followed by the
/// tag byte and the payload.
struct Frame {
    std::uint8_t tag = 0;
    std::vector<std::uint8_t> payload;

    friend bool operator==(const Frame&, const Frame&) = default;
};

class ProtocolError : public std::runtime_error {
public:
    explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

/// Ordered, reliable, bidirectional frame channel. send/receive are
/// blocking; each endpoint is meant to be driven by a single thread.
class Channel {
public:
    virtual ~Channel() = default;

    void send(const Frame& f) {
        do_send(f);
        ++sent_;
    }
    Frame receive() {
        Frame f = do_receive();
        ++received_;
        return f;
    }

    std::size_t frames_sent() const { return sent_; }
    std::size_t frames_received() const { return received_; }

protected:
    virtual void do_send(const Frame& f) = 0;
    virtual Frame do_receive() = 0;

private:
    std::size_t sent_ = 0;
    std::size_t received_ = 0;
};

/// Pair of connected in-process endpoints (thread-safe queues under the
/// hood). Dropping one endpoint makes receive() on the other throw once its
/// queue drains.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> make_local_pair();

/// Listening TCP socket on 127.0.0.1. Port 0 picks an ephemeral port.
class TcpListener {
public:
    explicit TcpListener(std::uint16_t port);
    ~TcpListener();
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::uint16_t port() const { return port_; }
    std::unique_ptr<Channel> accept();

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

std::unique_ptr<Channel> tcp_connect(const std::string& host, std::uint16_t port);

inline constexpr std::uint32_t PROTOCOL_VERSION = 1;
inline constexpr std::uint8_t TAG_HELLO = 0x01;

/// Symmetric handshake: each side sends a hello frame carrying the protocol
/// version and the cluster config hash, then checks the peer's.
void handshake_send(Channel& ch, const Digest& config_hash);
void handshake_check(Channel& ch, const Digest& config_hash);

/// "host:port" -> (host, port). Throws on malformed input.
std::pair<std::string, std::uint16_t> split_host_port(const std::string& endpoint);

} // namespace zkb
