#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "zkb/merkle.hpp"

using namespace zkb;

namespace {

std::mt19937_64 rng(0x5eed3);

std::vector<std::uint8_t> random_bytes(std::size_t n) {
    std::vector<std::uint8_t> v(n);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng());
    return v;
}

std::vector<std::vector<std::uint8_t>> random_leaves(std::size_t n) {
    std::vector<std::vector<std::uint8_t>> leaves(n);
    for (auto& l : leaves) l = random_bytes(1 + rng() % 40);
    return leaves;
}

} // namespace

TEST_CASE("single leaf root is the leaf hash") {
    std::vector<std::uint8_t> leaf{1, 2, 3};
    CHECK(mt_commit({leaf}).digest == merkle_leaf_hash(leaf));
}

TEST_CASE("permuting distinct leaves changes the root") {
    auto leaves = random_leaves(4);
    auto root = mt_commit(leaves);
    std::swap(leaves[1], leaves[2]);
    CHECK(!(mt_commit(leaves) == root));
}

TEST_CASE("4-leaf root matches hand-rolled two-level hash") {
    auto leaves = random_leaves(4);
    auto h01 = [](const Digest& l, const Digest& r) {
        Hasher h;
        h.update_byte(0x01);
        h.update(bytes_of(l));
        h.update(bytes_of(r));
        return h.finalize();
    };
    Digest n0 = h01(merkle_leaf_hash(leaves[0]), merkle_leaf_hash(leaves[1]));
    Digest n1 = h01(merkle_leaf_hash(leaves[2]), merkle_leaf_hash(leaves[3]));
    CHECK(mt_commit(leaves).digest == h01(n0, n1));
}

TEST_CASE("empty vector rejected") {
    CHECK_THROWS_AS((void)mt_commit({}), std::invalid_argument);
}

TEST_CASE("completeness: open then verify, all sizes up to 64") {
    for (std::size_t n = 1; n <= 64; ++n) {
        auto leaves = random_leaves(n);
        MerkleTree tree(leaves);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(mt_verify(tree.open(i), leaves[i], tree.root()));
    }
}

TEST_CASE("odd sizes pad to the next power of two") {
    auto leaves = random_leaves(5);
    MerkleTree tree(leaves);
    CHECK(tree.open(0).siblings.size() == 3);
    CHECK_THROWS_AS((void)tree.open(5), std::invalid_argument);
}

TEST_CASE("binding: tampered leaf fails") {
    auto leaves = random_leaves(8);
    MerkleTree tree(leaves);
    auto path = tree.open(3);
    auto tampered = leaves[3];
    tampered[0] ^= 1;
    CHECK(!mt_verify(path, tampered, tree.root()));
}

TEST_CASE("wrong index fails, exhaustive small trees") {
    for (std::size_t n : {2u, 4u, 8u}) {
        auto leaves = random_leaves(n);
        MerkleTree tree(leaves);
        for (std::size_t i = 0; i < n; ++i) {
            auto path = tree.open(i);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                auto moved = path;
                moved.leaf_index = j;
                CHECK(!mt_verify(moved, leaves[i], tree.root()));
                CHECK(!mt_verify(path, leaves[j], tree.root()));
            }
        }
    }
}

TEST_CASE("binding: random single-bit mutations fail") {
    auto leaves = random_leaves(16);
    MerkleTree tree(leaves);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t i = rng() % 16;
        auto path = tree.open(i);
        auto leaf = leaves[i];
        switch (rng() % 3) {
            case 0:
                leaf[rng() % leaf.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
                break;
            case 1:
                path.leaf_index ^= std::uint64_t{1} << (rng() % 4);
                break;
            default: {
                auto& sib = path.siblings[rng() % path.siblings.size()];
                sib[rng() % 32] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
                break;
            }
        }
        CHECK(!mt_verify(path, leaf, tree.root()));
    }
}

TEST_CASE("path serialization round-trip") {
    auto leaves = random_leaves(16);
    MerkleTree tree(leaves);
    auto path = tree.open(11);
    auto bytes = tree.open(11).serialize();
    std::size_t consumed = 0;
    auto back = MerklePath::deserialize(bytes, &consumed);
    CHECK(consumed == bytes.size());
    CHECK(back.leaf_index == path.leaf_index);
    CHECK(back.siblings == path.siblings);
}
