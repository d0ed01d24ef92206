#include "zkb/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

#include "zkb/serio.hpp"

namespace zkb {

namespace {

constexpr std::uint32_t MAX_FRAME_BYTES = 1u << 30;

// ---- in-process channel -------------------------------------------------

struct LocalState {
    std::mutex mutex;
    std::condition_variable cv;
    std::deque<Frame> queue[2]; // queue[i] holds frames destined for side i
    bool closed[2] = {false, false};
};

class LocalChannel final : public Channel {
public:
    LocalChannel(std::shared_ptr<LocalState> st, int side) : st_(std::move(st)), side_(side) {}

    ~LocalChannel() override {
        std::lock_guard lk(st_->mutex);
        st_->closed[side_] = true;
        st_->cv.notify_all();
    }

protected:
    void do_send(const Frame& f) override {
        std::lock_guard lk(st_->mutex);
        if (st_->closed[1 - side_]) throw ProtocolError("send on closed channel");
        st_->queue[1 - side_].push_back(f);
        st_->cv.notify_all();
    }

    Frame do_receive() override {
        std::unique_lock lk(st_->mutex);
        auto& q = st_->queue[side_];
        st_->cv.wait(lk, [&] { return !q.empty() || st_->closed[1 - side_]; });
        if (q.empty()) throw ProtocolError("peer disconnected");
        Frame f = std::move(q.front());
        q.pop_front();
        return f;
    }

private:
    std::shared_ptr<LocalState> st_;
    int side_;
};

// ---- TCP channel --------------------------------------------------------

void write_all(int fd, const std::uint8_t* data, std::size_t len) {
    while (len > 0) {
        ssize_t n = ::send(fd, data, len, MSG_NOSIGNAL);
        if (n <= 0) throw ProtocolError("tcp send failed");
        data += n;
        len -= static_cast<std::size_t>(n);
    }
}

void read_all(int fd, std::uint8_t* data, std::size_t len) {
    while (len > 0) {
        ssize_t n = ::recv(fd, data, len, 0);
        if (n <= 0) throw ProtocolError("tcp receive failed (peer disconnected?)");
        data += n;
        len -= static_cast<std::size_t>(n);
    }
}

class TcpChannel final : public Channel {
public:
    explicit TcpChannel(int fd) : fd_(fd) {
        int one = 1;
        ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    }
    ~TcpChannel() override {
        if (fd_ >= 0) ::close(fd_);
    }

protected:
    void do_send(const Frame& f) override {
        if (f.payload.size() + 1 > MAX_FRAME_BYTES) throw ProtocolError("frame too large");
        auto len = static_cast<std::uint32_t>(f.payload.size() + 1);
        std::uint8_t head[5] = {static_cast<std::uint8_t>(len),
                                static_cast<std::uint8_t>(len >> 8),
                                static_cast<std::uint8_t>(len >> 16),
                                static_cast<std::uint8_t>(len >> 24), f.tag};
        write_all(fd_, head, sizeof head);
        if (!f.payload.empty()) write_all(fd_, f.payload.data(), f.payload.size());
    }

    Frame do_receive() override {
        std::uint8_t head[4];
        read_all(fd_, head, sizeof head);
        std::uint32_t len = std::uint32_t{head[0]} | std::uint32_t{head[1]} << 8 |
                            std::uint32_t{head[2]} << 16 | std::uint32_t{head[3]} << 24;
        if (len == 0 || len > MAX_FRAME_BYTES) throw ProtocolError("malformed frame length");
        Frame f;
        read_all(fd_, &f.tag, 1);
        f.payload.resize(len - 1);
        if (len > 1) read_all(fd_, f.payload.data(), f.payload.size());
        return f;
    }

private:
    int fd_;
};

} // namespace

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> make_local_pair() {
    auto st = std::make_shared<LocalState>();
    return {std::make_unique<LocalChannel>(st, 0), std::make_unique<LocalChannel>(st, 1)};
}

TcpListener::TcpListener(std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw ProtocolError("socket() failed");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        ::close(fd_);
        throw ProtocolError("bind() failed");
    }
    if (::listen(fd_, 16) != 0) {
        ::close(fd_);
        throw ProtocolError("listen() failed");
    }
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<Channel> TcpListener::accept() {
    int cfd = ::accept(fd_, nullptr, nullptr);
    if (cfd < 0) throw ProtocolError("accept() failed");
    return std::make_unique<TcpChannel>(cfd);
}

std::unique_ptr<Channel> tcp_connect(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0 || !res)
        throw ProtocolError("cannot resolve " + host);
    int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (fd < 0) {
        ::freeaddrinfo(res);
        throw ProtocolError("socket() failed");
    }
    int rc = ::connect(fd, res->ai_addr, res->ai_addrlen);
    ::freeaddrinfo(res);
    if (rc != 0) {
        ::close(fd);
        throw ProtocolError("connect to " + host + ":" + std::to_string(port) + " failed");
    }
    return std::make_unique<TcpChannel>(fd);
}

void handshake_send(Channel& ch, const Digest& config_hash) {
    ByteWriter w;
    w.u32(PROTOCOL_VERSION);
    w.digest(config_hash);
    ch.send(Frame{TAG_HELLO, std::move(w.bytes)});
}

void handshake_check(Channel& ch, const Digest& config_hash) {
    Frame f = ch.receive();
    if (f.tag != TAG_HELLO) throw ProtocolError("handshake: unexpected frame tag");
    ByteReader r(f.payload);
    std::uint32_t version;
    Digest peer_hash;
    try {
        version = r.u32();
        peer_hash = r.digest();
    } catch (const std::invalid_argument&) {
        throw ProtocolError("handshake: malformed hello frame");
    }
    if (!r.done()) throw ProtocolError("handshake: trailing bytes in hello frame");
    if (version != PROTOCOL_VERSION)
        throw ProtocolError("handshake: protocol version mismatch (peer sent " +
                            std::to_string(version) + ")");
    if (peer_hash != config_hash) throw ProtocolError("handshake: cluster config hash mismatch");
}

std::pair<std::string, std::uint16_t> split_host_port(const std::string& endpoint) {
    auto colon = endpoint.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == endpoint.size())
        throw std::invalid_argument("endpoint must be host:port, got '" + endpoint + "'");
    unsigned long port = std::stoul(endpoint.substr(colon + 1));
    if (port == 0 || port > 65535) throw std::invalid_argument("port out of range in '" + endpoint + "'");
    return {endpoint.substr(0, colon), static_cast<std::uint16_t>(port)};
}

} // namespace zkb
