#include "zkb/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace zkb {

namespace {
EVP_MD_CTX* new_sha256_ctx() {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 init failed");
    return ctx;
}
} // namespace

Digest sha256(std::span<const std::uint8_t> data) {
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    return out;
}

Hasher::Hasher() : ctx_(new_sha256_ctx()) {}

Hasher::Hasher(const Hasher& o) : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_MD_CTX_copy_ex(static_cast<EVP_MD_CTX*>(ctx_),
                                    static_cast<EVP_MD_CTX*>(o.ctx_)) != 1)
        throw std::runtime_error("sha256 copy failed");
}

Hasher& Hasher::operator=(const Hasher& o) {
    if (this != &o) {
        if (EVP_MD_CTX_copy_ex(static_cast<EVP_MD_CTX*>(ctx_),
                               static_cast<EVP_MD_CTX*>(o.ctx_)) != 1)
            throw std::runtime_error("sha256 copy failed");
    }
    return *this;
}

Hasher::~Hasher() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

void Hasher::update(std::span<const std::uint8_t> data) {
    if (EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size()) != 1)
        throw std::runtime_error("sha256 update failed");
}

void Hasher::update_byte(std::uint8_t b) { update({&b, 1}); }

void Hasher::update_u64le(std::uint64_t v) {
    std::uint8_t buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(v >> (8 * i));
    update({buf, 8});
}

Digest Hasher::finalize() const {
    Hasher copy(*this);
    Digest out{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(copy.ctx_), out.data(), &len) != 1)
        throw std::runtime_error("sha256 final failed");
    return out;
}

std::string hex(const Digest& d) {
    static const char* k = "0123456789abcdef";
    std::string s;
    s.reserve(64);
    for (auto b : d) {
        s.push_back(k[b >> 4]);
        s.push_back(k[b & 15]);
    }
    return s;
}

} // namespace zkb
