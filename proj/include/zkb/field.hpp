#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>
#include <stdexcept>
#include <string>

namespace zkb {

/// Prime field with p = 2^64 - 2^32 + 1 (Goldilocks).
/// The multiplicative group has order 2^32 * (2^32 - 1), so a subgroup of
/// every power-of-two order up to 2^32 exists.
class Fp {
public:
    static constexpr std::uint64_t MOD = 0xFFFFFFFF00000001ULL;
    static constexpr std::uint64_t EPSILON = 0xFFFFFFFFULL; // 2^64 mod p

    constexpr Fp() : v_(0) {}
    constexpr explicit Fp(std::uint64_t v) : v_(v >= MOD ? v - MOD : v) {}

    static constexpr Fp zero() { return Fp(); }
    static constexpr Fp one() { return Fp(1); }

    // Raw canonical value in [0, p).
    constexpr std::uint64_t value() const { return v_; }

    static constexpr Fp from_raw_unchecked(std::uint64_t v) {
        Fp f;
        f.v_ = v;
        return f;
    }

    Fp& operator+=(Fp o) {
        std::uint64_t s = v_ + o.v_;
        if (s < v_) s += EPSILON; // wrapped past 2^64
        if (s >= MOD) s -= MOD;
        v_ = s;
        return *this;
    }

    Fp& operator-=(Fp o) {
        std::uint64_t d = v_ - o.v_;
        if (v_ < o.v_) d -= EPSILON;
        v_ = d;
        return *this;
    }

    Fp& operator*=(Fp o) {
        v_ = mul_reduce(v_, o.v_);
        return *this;
    }

    friend Fp operator+(Fp a, Fp b) { a += b; return a; }
    friend Fp operator-(Fp a, Fp b) { a -= b; return a; }
    friend Fp operator*(Fp a, Fp b) { a *= b; return a; }
    friend Fp operator-(Fp a) { return Fp::zero() - a; }

    friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
    friend bool operator!=(Fp a, Fp b) { return a.v_ != b.v_; }

    bool is_zero() const { return v_ == 0; }

    Fp pow(std::uint64_t e) const {
        Fp base = *this, acc = Fp::one();
        while (e) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    Fp inverse() const {
        if (is_zero()) throw std::invalid_argument("Fp: inverse of zero");
        return pow(MOD - 2);
    }

    // x*y mod p for x, y < p.
    static std::uint64_t mul_reduce(std::uint64_t x, std::uint64_t y) {
        unsigned __int128 w = static_cast<unsigned __int128>(x) * y;
        std::uint64_t lo = static_cast<std::uint64_t>(w);
        std::uint64_t hi = static_cast<std::uint64_t>(w >> 64);
        std::uint64_t hi_lo = hi & 0xFFFFFFFFULL;
        std::uint64_t hi_hi = hi >> 32;
        // 2^64 = 2^32 - 1, 2^96 = -1 (mod p)
        std::uint64_t t = lo - hi_hi;
        if (lo < hi_hi) t -= EPSILON;
        std::uint64_t mid = (hi_lo << 32) - hi_lo;
        std::uint64_t s = t + mid;
        if (s < t) s += EPSILON;
        if (s >= MOD) s -= MOD;
        return s;
    }

private:
    std::uint64_t v_;
};

/// 8-byte little-endian canonical encoding; value < p enforced on decode.
inline void fp_serialize(Fp x, std::vector<std::uint8_t>& out) {
    std::uint64_t v = x.value();
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline Fp fp_deserialize(const std::uint8_t* data) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data[i]) << (8 * i);
    if (v >= Fp::MOD) throw std::invalid_argument("Fp: non-canonical encoding");
    return Fp::from_raw_unchecked(v);
}

} // namespace zkb
