#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zkb/hash.hpp"

namespace zkb {

struct MerkleRoot {
    Digest digest{};

    friend bool operator==(const MerkleRoot&, const MerkleRoot&) = default;
};

struct MerklePath {
    std::uint64_t leaf_index = 0;
    std::vector<Digest> siblings; // leaf to root order

    std::vector<std::uint8_t> serialize() const;
    static MerklePath deserialize(std::span<const std::uint8_t> bytes, std::size_t* consumed);

    friend bool operator==(const MerklePath&, const MerklePath&) = default;
};

/// Merkle tree over byte-string leaves. Leaf count is padded to the next
/// power of two with empty-string leaves. Leaf hash = H(0x00 || len_le64 ||
/// leaf), node hash = H(0x01 || left || right).
class MerkleTree {
public:
    explicit MerkleTree(const std::vector<std::vector<std::uint8_t>>& leaves);

    MerkleRoot root() const;
    std::size_t leaf_count() const { return leaf_count_; }
    MerklePath open(std::size_t index) const;

private:
    std::size_t leaf_count_;          // before padding
    std::size_t padded_count_;
    std::vector<std::vector<Digest>> levels_; // levels_[0] = leaf hashes
};

Digest merkle_leaf_hash(std::span<const std::uint8_t> leaf);

MerkleRoot mt_commit(const std::vector<std::vector<std::uint8_t>>& leaves);

bool mt_verify(const MerklePath& path, std::span<const std::uint8_t> leaf, const MerkleRoot& root);

} // namespace zkb
