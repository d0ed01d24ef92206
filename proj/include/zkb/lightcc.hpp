#pragma once

#include <cstddef>
#include <vector>

#include "zkb/circuit.hpp"
#include "zkb/field.hpp"
#include "zkb/hash.hpp"

namespace zkb {

/// Fixed-key algebraic permutation over Fp: MIMC_ROUNDS rounds of
/// x <- (x + K[j])^7. Exponent 7 is coprime to p-1 (3 and 5 are not for
/// this field), so each round is a bijection. Round constants are derived
/// from SHA-256.
inline constexpr std::size_t MIMC_ROUNDS = 80;

Fp mimc_round_constant(std::size_t j);
Fp mimc_permute(Fp x);

/// Toy committee signature: pk = P(sk), sig over a message m = P(sk + m).
Fp lc_keygen(Fp sk);
Fp lc_sign(Fp sk, Fp message);
bool lc_sig_valid(Fp pk, Fp sig, Fp sk, Fp message);

/// First 8 bytes of a 32-byte digest, little-endian, reduced mod p.
Fp digest_to_field(const Digest& d);

/// One signature check as a layered circuit. Per-copy input layer (size 8):
///   public  [0..3]: message (header digest as a field element), pk, sig, 1
///   witness [4..7]: sk, 0, 0, 0
/// Output layer (size 2): (1, 1) iff pk = P(sk) and sig = P(sk + message).
LayeredCircuit build_signature_subcircuit();

/// n_sig data-parallel copies of the signature sub-circuit; all outputs are
/// claimed to be 1 for a fully signed header.
DataParallelCircuit build_light_client_circuit(std::size_t n_sig);

/// Assembles one copy's input slice in the layout above.
std::vector<Fp> lc_copy_input(Fp message, Fp pk, Fp sig, Fp sk);

} // namespace zkb
