#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <thread>

#include "helpers.hpp"
#include "zkb/transport.hpp"

using namespace zkb;

namespace {

Frame frame(std::uint8_t tag, std::initializer_list<std::uint8_t> bytes) {
    return Frame{tag, std::vector<std::uint8_t>(bytes)};
}

} // namespace

TEST_CASE("local pair delivers frames in order with exact counters") {
    auto [a, b] = make_local_pair();
    a->send(frame(7, {1, 2, 3}));
    a->send(frame(8, {}));
    b->send(frame(9, {0xff}));
    CHECK(b->receive() == frame(7, {1, 2, 3}));
    CHECK(b->receive() == frame(8, {}));
    CHECK(a->receive() == frame(9, {0xff}));
    CHECK(a->frames_sent() == 2);
    CHECK(a->frames_received() == 1);
    CHECK(b->frames_sent() == 1);
    CHECK(b->frames_received() == 2);
}

TEST_CASE("local receive blocks until the peer sends") {
    auto [a, b] = make_local_pair();
    std::thread t([ch = std::move(b)]() mutable {
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        ch->send(frame(1, {42}));
    });
    CHECK(a->receive() == frame(1, {42}));
    t.join();
}

TEST_CASE("dropping a local endpoint fails pending and later receives") {
    auto [a, b] = make_local_pair();
    b->send(frame(5, {9}));
    b.reset();
    // buffered frame still delivered, then the closed channel surfaces
    CHECK(a->receive() == frame(5, {9}));
    CHECK_THROWS_AS(a->receive(), ProtocolError);
    CHECK_THROWS_AS(a->send(frame(1, {})), ProtocolError);
}

TEST_CASE("tcp round-trip over loopback") {
    TcpListener listener(0);
    REQUIRE(listener.port() != 0);

    std::unique_ptr<Channel> server;
    std::thread t([&] { server = listener.accept(); });
    auto client = tcp_connect("127.0.0.1", listener.port());
    t.join();

    std::mt19937_64 rng(0x7a9);
    for (int i = 0; i < 50; ++i) {
        Frame f;
        f.tag = static_cast<std::uint8_t>(rng());
        f.payload.resize(rng() % 2000);
        for (auto& x : f.payload) x = static_cast<std::uint8_t>(rng());
        client->send(f);
        CHECK(server->receive() == f);
        server->send(f);
        CHECK(client->receive() == f);
    }
    CHECK(client->frames_sent() == 50);
    CHECK(server->frames_received() == 50);

    // large frame crosses several socket writes
    Frame big{3, std::vector<std::uint8_t>(1 << 20, 0xab)};
    client->send(big);
    CHECK(server->receive() == big);
}

TEST_CASE("tcp receive fails when the peer disconnects") {
    TcpListener listener(0);
    std::unique_ptr<Channel> server;
    std::thread t([&] { server = listener.accept(); });
    auto client = tcp_connect("127.0.0.1", listener.port());
    t.join();
    client.reset();
    CHECK_THROWS_AS(server->receive(), ProtocolError);
}

TEST_CASE("handshake accepts matching config and rejects mismatches") {
    Digest cfg{};
    cfg[0] = 1;
    Digest other = cfg;
    other[31] = 0xee;

    auto [a, b] = make_local_pair();
    handshake_send(*a, cfg);
    handshake_send(*b, cfg);
    CHECK_NOTHROW(handshake_check(*a, cfg));
    CHECK_NOTHROW(handshake_check(*b, cfg));

    // config hash mismatch
    auto [c, d] = make_local_pair();
    handshake_send(*c, cfg);
    CHECK_THROWS_AS(handshake_check(*d, other), ProtocolError);

    // wrong tag
    auto [e, f] = make_local_pair();
    e->send(frame(0x55, {}));
    CHECK_THROWS_AS(handshake_check(*f, cfg), ProtocolError);

    // truncated hello
    auto [g, h] = make_local_pair();
    g->send(frame(TAG_HELLO, {1, 0, 0, 0}));
    CHECK_THROWS_AS(handshake_check(*h, cfg), ProtocolError);
}

TEST_CASE("handshake runs over tcp") {
    TcpListener listener(0);
    Digest cfg{};
    cfg[5] = 7;
    std::thread t([&] {
        auto server = listener.accept();
        handshake_send(*server, cfg);
        handshake_check(*server, cfg);
        server->send(frame(2, {1}));
    });
    auto client = tcp_connect("127.0.0.1", listener.port());
    handshake_send(*client, cfg);
    handshake_check(*client, cfg);
    CHECK(client->receive() == frame(2, {1}));
    t.join();
}

TEST_CASE("split_host_port") {
    auto [host, port] = split_host_port("127.0.0.1:9000");
    CHECK(host == "127.0.0.1");
    CHECK(port == 9000);
    CHECK_THROWS_AS(split_host_port("nohost"), std::invalid_argument);
    CHECK_THROWS_AS(split_host_port(":123"), std::invalid_argument);
    CHECK_THROWS_AS(split_host_port("h:"), std::invalid_argument);
    CHECK_THROWS_AS(split_host_port("h:70000"), std::invalid_argument);
}
