#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zkb/field.hpp"
#include "zkb/hash.hpp"

namespace zkb {

/// Fiat-Shamir transcript. Challenges are deterministic functions of the
/// domain-separation label, the prover identity, and every absorbed message
/// in order. Binding the identity makes proofs unstealable: a different
/// identity yields different challenges.
class Transcript {
public:
    Transcript(const std::string& label, std::span<const std::uint8_t> identity);

    void absorb(std::span<const std::uint8_t> bytes);
    void absorb(Fp x);
    void absorb(std::span<const Fp> xs);
    void absorb(const Digest& d);

    Fp challenge_fp();
    std::vector<Fp> challenge_fps(std::size_t n);
    std::uint64_t challenge_index(std::uint64_t bound); // uniform in [0, bound)

private:
    Digest draw();

    Hasher state_;
    std::uint64_t counter_ = 0;
};

} // namespace zkb
