#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "zkb/field.hpp"
#include "zkb/hash.hpp"

namespace zkb {

/// Little-endian byte writer for proof and wire formats.
class ByteWriter {
public:
    std::vector<std::uint8_t> bytes;

    void u8(std::uint8_t v) { bytes.push_back(v); }
    void u16(std::uint16_t v) {
        bytes.push_back(static_cast<std::uint8_t>(v));
        bytes.push_back(static_cast<std::uint8_t>(v >> 8));
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void fp(Fp x) { u64(x.value()); }
    void fps(std::span<const Fp> xs) {
        u64(xs.size());
        for (Fp x : xs) fp(x);
    }
    void digest(const Digest& d) { bytes.insert(bytes.end(), d.begin(), d.end()); }
    void blob(std::span<const std::uint8_t> b) {
        u64(b.size());
        bytes.insert(bytes.end(), b.begin(), b.end());
    }
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8() { return take(1)[0]; }
    std::uint16_t u16() {
        auto b = take(2);
        return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
    }
    std::uint32_t u32() {
        auto b = take(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{b[i]} << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        auto b = take(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
        return v;
    }
    Fp fp() {
        std::uint64_t v = u64();
        if (v >= Fp::MOD) throw std::invalid_argument("decode: non-canonical field element");
        return Fp::from_raw_unchecked(v);
    }
    std::vector<Fp> fps() {
        std::uint64_t n = u64();
        check_count(n, 8);
        std::vector<Fp> out(n);
        for (auto& x : out) x = fp();
        return out;
    }
    Digest digest() {
        auto b = take(32);
        Digest d;
        std::copy(b.begin(), b.end(), d.begin());
        return d;
    }
    std::vector<std::uint8_t> blob() {
        std::uint64_t n = u64();
        check_count(n, 1);
        auto b = take(n);
        return {b.begin(), b.end()};
    }
    bool done() const { return pos_ == data_.size(); }
    std::size_t remaining() const { return data_.size() - pos_; }
    std::span<const std::uint8_t> rest() const { return data_.subspan(pos_); }
    void skip(std::size_t n) { (void)take(n); }

private:
    std::span<const std::uint8_t> take(std::size_t n) {
        if (pos_ + n > data_.size()) throw std::invalid_argument("decode: truncated input");
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    void check_count(std::uint64_t n, std::size_t elem) {
        if (n > remaining() / elem) throw std::invalid_argument("decode: bad count");
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

} // namespace zkb
