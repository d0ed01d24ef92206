#include "zkb/merkle.hpp"

#include <stdexcept>

namespace zkb {

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

Digest node_hash(const Digest& left, const Digest& right) {
    Hasher h;
    h.update_byte(0x01);
    h.update(bytes_of(left));
    h.update(bytes_of(right));
    return h.finalize();
}

} // namespace

Digest merkle_leaf_hash(std::span<const std::uint8_t> leaf) {
    Hasher h;
    h.update_byte(0x00);
    h.update_u64le(leaf.size());
    h.update(leaf);
    return h.finalize();
}

MerkleTree::MerkleTree(const std::vector<std::vector<std::uint8_t>>& leaves)
    : leaf_count_(leaves.size()), padded_count_(next_pow2(leaves.size())) {
    if (leaves.empty()) throw std::invalid_argument("MerkleTree: empty leaf vector");
    std::vector<Digest> level;
    level.reserve(padded_count_);
    for (const auto& leaf : leaves) level.push_back(merkle_leaf_hash(leaf));
    const Digest empty_leaf = merkle_leaf_hash({});
    level.resize(padded_count_, empty_leaf);
    levels_.push_back(std::move(level));
    while (levels_.back().size() > 1) {
        const auto& prev = levels_.back();
        std::vector<Digest> next(prev.size() / 2);
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = node_hash(prev[2 * i], prev[2 * i + 1]);
        levels_.push_back(std::move(next));
    }
}

MerkleRoot MerkleTree::root() const { return MerkleRoot{levels_.back()[0]}; }

MerklePath MerkleTree::open(std::size_t index) const {
    if (index >= leaf_count_) throw std::invalid_argument("MerkleTree::open: index out of range");
    MerklePath path;
    path.leaf_index = index;
    for (std::size_t lvl = 0; lvl + 1 < levels_.size(); ++lvl) {
        path.siblings.push_back(levels_[lvl][index ^ 1]);
        index >>= 1;
    }
    return path;
}

MerkleRoot mt_commit(const std::vector<std::vector<std::uint8_t>>& leaves) {
    return MerkleTree(leaves).root();
}

bool mt_verify(const MerklePath& path, std::span<const std::uint8_t> leaf, const MerkleRoot& root) {
    Digest acc = merkle_leaf_hash(leaf);
    std::uint64_t idx = path.leaf_index;
    for (const auto& sib : path.siblings) {
        acc = (idx & 1) ? node_hash(sib, acc) : node_hash(acc, sib);
        idx >>= 1;
    }
    if (idx != 0) return false; // index too large for the path length
    return acc == root.digest;
}

std::vector<std::uint8_t> MerklePath::serialize() const {
    std::vector<std::uint8_t> out;
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(leaf_index >> (8 * i)));
    std::uint16_t count = static_cast<std::uint16_t>(siblings.size());
    out.push_back(static_cast<std::uint8_t>(count & 0xff));
    out.push_back(static_cast<std::uint8_t>(count >> 8));
    for (const auto& d : siblings) out.insert(out.end(), d.begin(), d.end());
    return out;
}

MerklePath MerklePath::deserialize(std::span<const std::uint8_t> bytes, std::size_t* consumed) {
    if (bytes.size() < 10) throw std::invalid_argument("MerklePath: truncated");
    MerklePath path;
    for (int i = 0; i < 8; ++i) path.leaf_index |= std::uint64_t{bytes[i]} << (8 * i);
    std::uint16_t count = static_cast<std::uint16_t>(bytes[8] | (bytes[9] << 8));
    std::size_t need = 10 + std::size_t{count} * 32;
    if (bytes.size() < need) throw std::invalid_argument("MerklePath: truncated");
    for (std::size_t i = 0; i < count; ++i) {
        Digest d;
        std::copy_n(bytes.begin() + 10 + i * 32, 32, d.begin());
        path.siblings.push_back(d);
    }
    if (consumed) *consumed = need;
    return path;
}

} // namespace zkb
