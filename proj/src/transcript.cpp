#include "zkb/transcript.hpp"

namespace zkb {

Transcript::Transcript(const std::string& label, std::span<const std::uint8_t> identity) {
    state_.update_u64le(label.size());
    state_.update(bytes_of(label));
    state_.update_u64le(identity.size());
    state_.update(identity);
}

void Transcript::absorb(std::span<const std::uint8_t> bytes) {
    state_.update_byte(0x02);
    state_.update_u64le(bytes.size());
    state_.update(bytes);
}

void Transcript::absorb(Fp x) {
    state_.update_byte(0x03);
    state_.update_u64le(x.value());
}

void Transcript::absorb(std::span<const Fp> xs) {
    state_.update_byte(0x04);
    state_.update_u64le(xs.size());
    for (Fp x : xs) state_.update_u64le(x.value());
}

void Transcript::absorb(const Digest& d) {
    state_.update_byte(0x05);
    state_.update(bytes_of(d));
}

Digest Transcript::draw() {
    Hasher h = state_;
    h.update_byte(0x06);
    h.update_u64le(counter_++);
    return h.finalize();
}

Fp Transcript::challenge_fp() {
    for (;;) {
        Digest d = draw();
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{d[i]} << (8 * i);
        if (v < Fp::MOD) return Fp::from_raw_unchecked(v); // rejection sample
    }
}

std::vector<Fp> Transcript::challenge_fps(std::size_t n) {
    std::vector<Fp> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(challenge_fp());
    return out;
}

std::uint64_t Transcript::challenge_index(std::uint64_t bound) {
    if ((bound & (bound - 1)) == 0) {
        Digest d = draw();
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{d[i]} << (8 * i);
        return v & (bound - 1);
    }
    // rejection sampling for non-power-of-two bounds
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    for (;;) {
        Digest d = draw();
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{d[i]} << (8 * i);
        if (v < limit) return v % bound;
    }
}

} // namespace zkb
