#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

namespace zkb {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);

/// Incremental SHA-256, used for Merkle nodes and the transcript.
class Hasher {
public:
    Hasher();
    Hasher(const Hasher&);
    Hasher& operator=(const Hasher&);
    ~Hasher();

    void update(std::span<const std::uint8_t> data);
    void update_byte(std::uint8_t b);
    void update_u64le(std::uint64_t v);
    Digest finalize() const; // does not consume the state

private:
    void* ctx_;
};

inline std::span<const std::uint8_t> bytes_of(const Digest& d) {
    return {d.data(), d.size()};
}

inline std::span<const std::uint8_t> bytes_of(const std::string& s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string hex(const Digest& d);

} // namespace zkb
