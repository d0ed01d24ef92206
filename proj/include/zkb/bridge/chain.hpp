#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zkb/field.hpp"
#include "zkb/hash.hpp"
#include "zkb/merkle.hpp"
#include "zkb/serio.hpp"

namespace zkb {

/// Header of one simulated sender-chain block. The digest covers every
/// field except the signatures, which attest to the digest itself.
struct BlockHeader {
    std::uint64_t height = 0;
    Digest parent{};
    MerkleRoot tx_root;
    Digest validator_commitment{}; // commits the committee signing the NEXT block
    std::vector<std::pair<std::uint32_t, Fp>> signatures; // (committee index, toy signature)

    Digest digest() const;
    void serialize(ByteWriter& w) const;
    static BlockHeader deserialize(ByteReader& r);

    friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

/// Commitment to a committee public-key list.
Digest committee_commitment(std::span<const Fp> pubkeys);

/// Compact light-client state: the commitment of the committee expected to
/// sign the next header, plus the latest accepted header.
struct LightClientState {
    Digest committee_commitment{};
    Digest latest{};
    std::uint64_t height = 0;
    std::size_t committee_size = 4;
    std::size_t quorum = 3;

    void serialize(ByteWriter& w) const;
    static LightClientState deserialize(ByteReader& r);

    friend bool operator==(const LightClientState&, const LightClientState&) = default;
};

/// Structural half of the light-client rule: parent link, height, committee
/// binding, signer indexes distinct and in range, signer count >= quorum.
/// Signature validity is the proved half (the circuit statement), since the
/// toy MiMC signatures can only be checked with the signer's secret.
bool light_cc_public(const LightClientState& lcs, const BlockHeader& prev, const BlockHeader& next,
                     std::span<const Fp> committee);

/// Full rule including signature validity, given the signer secrets aligned
/// with next.signatures. This is the reference oracle for the circuit.
bool light_cc(const LightClientState& lcs, const BlockHeader& prev, const BlockHeader& next,
              std::span<const Fp> committee, std::span<const Fp> signer_secrets);

// ---- sender-chain simulator --------------------------------------------

struct ChainParams {
    std::size_t committee_size = 4;
    std::size_t quorum = 3;
    std::uint64_t seed = 1;
};

struct BlockBody {
    std::vector<std::vector<std::uint8_t>> txs;
};

/// One block known to the simulator with everything a relay needs to prove
/// it: the signing committee's public keys and the signers' secrets.
struct HeaderView {
    BlockHeader header;
    std::vector<Fp> committee;      // public keys of the signing committee
    std::vector<Fp> signer_secrets; // aligned with header.signatures

    friend bool operator==(const HeaderView&, const HeaderView&) = default;
};

/// Deterministic BFT-style chain: one committee per height derived from the
/// seed, quorum signatures per block, committee rotation committed one block
/// ahead.
class ChainSim {
public:
    explicit ChainSim(ChainParams params);

    const ChainParams& params() const { return params_; }
    const BlockHeader& genesis() const { return canonical_.front().header; }
    std::uint64_t tip_height() const { return canonical_.size() - 1; }

    /// Extends the canonical chain by one block; deterministic given seed.
    const BlockHeader& produce_block(std::vector<std::vector<std::uint8_t>> txs);

    /// A validly signed sibling of canonical block parent_height+1.
    const BlockHeader& produce_fork_block(std::uint64_t parent_height,
                                          std::vector<std::vector<std::uint8_t>> txs);

    /// Canonical header at `height` (genesis = 0); throws if out of range.
    const BlockHeader& header(std::uint64_t height) const;
    const BlockBody& body(std::uint64_t height) const;
    HeaderView view(std::uint64_t height) const;
    std::vector<HeaderView> fork_views() const;

    std::vector<Fp> committee_pubkeys(std::uint64_t height) const;
    MerklePath tx_path(std::uint64_t height, std::size_t tx_index) const;

private:
    struct Block {
        BlockHeader header;
        BlockBody body;
        std::vector<std::uint32_t> signer_indexes;
    };

    std::vector<Fp> committee_secrets(std::uint64_t height) const;
    Block make_block(const BlockHeader& parent, std::vector<std::vector<std::uint8_t>> txs,
                     std::uint64_t salt);

    ChainParams params_;
    std::vector<Block> canonical_; // [0] = genesis
    std::vector<Block> forks_;
};

} // namespace zkb
