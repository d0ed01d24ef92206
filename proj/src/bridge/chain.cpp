#include "zkb/bridge/chain.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "zkb/lightcc.hpp"

namespace zkb {

namespace {

Fp field_from_hash(Hasher& h) {
    Digest d = h.finalize();
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{d[i]} << (8 * i);
    return Fp::from_raw_unchecked(v % Fp::MOD);
}

} // namespace

Digest BlockHeader::digest() const {
    Hasher h;
    h.update(bytes_of(std::string("zkb.header")));
    h.update_u64le(height);
    h.update(bytes_of(parent));
    h.update(bytes_of(tx_root.digest));
    h.update(bytes_of(validator_commitment));
    return h.finalize();
}

void BlockHeader::serialize(ByteWriter& w) const {
    w.u64(height);
    w.digest(parent);
    w.digest(tx_root.digest);
    w.digest(validator_commitment);
    w.u64(signatures.size());
    for (auto [idx, sig] : signatures) {
        w.u32(idx);
        w.fp(sig);
    }
}

BlockHeader BlockHeader::deserialize(ByteReader& r) {
    BlockHeader h;
    h.height = r.u64();
    h.parent = r.digest();
    h.tx_root.digest = r.digest();
    h.validator_commitment = r.digest();
    std::uint64_t n = r.u64();
    if (n > 4096) throw std::invalid_argument("header: too many signatures");
    h.signatures.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint32_t idx = r.u32();
        h.signatures.emplace_back(idx, r.fp());
    }
    return h;
}

Digest committee_commitment(std::span<const Fp> pubkeys) {
    Hasher h;
    h.update(bytes_of(std::string("zkb.committee")));
    h.update_u64le(pubkeys.size());
    for (Fp pk : pubkeys) h.update_u64le(pk.value());
    return h.finalize();
}

void LightClientState::serialize(ByteWriter& w) const {
    w.digest(committee_commitment);
    w.digest(latest);
    w.u64(height);
    w.u64(committee_size);
    w.u64(quorum);
}

LightClientState LightClientState::deserialize(ByteReader& r) {
    LightClientState s;
    s.committee_commitment = r.digest();
    s.latest = r.digest();
    s.height = r.u64();
    s.committee_size = r.u64();
    s.quorum = r.u64();
    return s;
}

bool light_cc_public(const LightClientState& lcs, const BlockHeader& prev, const BlockHeader& next,
                     std::span<const Fp> committee) {
    if (committee.size() != lcs.committee_size) return false;
    if (committee_commitment(committee) != lcs.committee_commitment) return false;
    if (next.parent != prev.digest()) return false;
    if (next.height != prev.height + 1) return false;
    if (next.signatures.size() < lcs.quorum) return false;
    std::vector<bool> seen(committee.size(), false);
    for (auto [idx, sig] : next.signatures) {
        (void)sig;
        if (idx >= committee.size() || seen[idx]) return false;
        seen[idx] = true;
    }
    return true;
}

bool light_cc(const LightClientState& lcs, const BlockHeader& prev, const BlockHeader& next,
              std::span<const Fp> committee, std::span<const Fp> signer_secrets) {
    if (!light_cc_public(lcs, prev, next, committee)) return false;
    if (signer_secrets.size() != next.signatures.size()) return false;
    Fp msg = digest_to_field(next.digest());
    for (std::size_t i = 0; i < next.signatures.size(); ++i) {
        auto [idx, sig] = next.signatures[i];
        if (!lc_sig_valid(committee[idx], sig, signer_secrets[i], msg)) return false;
    }
    return true;
}

// ---- simulator ----------------------------------------------------------

ChainSim::ChainSim(ChainParams params) : params_(params) {
    if (params_.quorum == 0 || params_.quorum > params_.committee_size)
        throw std::invalid_argument("chain: quorum out of range");
    Block genesis;
    genesis.header.height = 0;
    genesis.header.tx_root = mt_commit({{'g', 'e', 'n'}});
    genesis.header.validator_commitment = committee_commitment(committee_pubkeys(1));
    canonical_.push_back(std::move(genesis));
}

std::vector<Fp> ChainSim::committee_secrets(std::uint64_t height) const {
    std::vector<Fp> sk(params_.committee_size);
    for (std::size_t i = 0; i < sk.size(); ++i) {
        Hasher h;
        h.update(bytes_of(std::string("zkb.chain.sk")));
        h.update_u64le(params_.seed);
        h.update_u64le(height);
        h.update_u64le(i);
        sk[i] = field_from_hash(h);
    }
    return sk;
}

std::vector<Fp> ChainSim::committee_pubkeys(std::uint64_t height) const {
    auto sk = committee_secrets(height);
    std::vector<Fp> pk(sk.size());
    for (std::size_t i = 0; i < sk.size(); ++i) pk[i] = lc_keygen(sk[i]);
    return pk;
}

ChainSim::Block ChainSim::make_block(const BlockHeader& parent,
                                     std::vector<std::vector<std::uint8_t>> txs,
                                     std::uint64_t salt) {
    Block b;
    if (txs.empty()) txs.push_back({});
    b.body.txs = std::move(txs);
    b.header.height = parent.height + 1;
    b.header.parent = parent.digest();
    b.header.tx_root = mt_commit(b.body.txs);
    b.header.validator_commitment = committee_commitment(committee_pubkeys(b.header.height + 1));

    // deterministic quorum-sized signer set
    std::vector<std::uint32_t> order(params_.committee_size);
    std::iota(order.begin(), order.end(), 0);
    Hasher h;
    h.update(bytes_of(std::string("zkb.chain.signers")));
    h.update_u64le(params_.seed);
    h.update_u64le(b.header.height);
    h.update_u64le(salt);
    Digest d = h.finalize();
    for (std::size_t i = order.size() - 1; i > 0; --i)
        std::swap(order[i], order[d[i % d.size()] % (i + 1)]);
    order.resize(params_.quorum);
    std::sort(order.begin(), order.end());
    b.signer_indexes = order;

    Fp msg = digest_to_field(b.header.digest());
    auto sk = committee_secrets(b.header.height);
    for (std::uint32_t idx : order) b.header.signatures.emplace_back(idx, lc_sign(sk[idx], msg));
    return b;
}

const BlockHeader& ChainSim::produce_block(std::vector<std::vector<std::uint8_t>> txs) {
    canonical_.push_back(make_block(canonical_.back().header, std::move(txs), 0));
    return canonical_.back().header;
}

const BlockHeader& ChainSim::produce_fork_block(std::uint64_t parent_height,
                                                std::vector<std::vector<std::uint8_t>> txs) {
    if (parent_height >= canonical_.size())
        throw std::invalid_argument("chain: fork parent out of range");
    if (txs.empty()) txs.push_back({'f', 'o', 'r', 'k'});
    forks_.push_back(make_block(canonical_[parent_height].header, std::move(txs),
                                forks_.size() + 1));
    return forks_.back().header;
}

const BlockHeader& ChainSim::header(std::uint64_t height) const {
    if (height >= canonical_.size()) throw std::out_of_range("chain: height beyond tip");
    return canonical_[height].header;
}

const BlockBody& ChainSim::body(std::uint64_t height) const {
    if (height >= canonical_.size()) throw std::out_of_range("chain: height beyond tip");
    return canonical_[height].body;
}

HeaderView ChainSim::view(std::uint64_t height) const {
    if (height == 0 || height >= canonical_.size())
        throw std::out_of_range("chain: no provable header at this height");
    const Block& b = canonical_[height];
    HeaderView v;
    v.header = b.header;
    v.committee = committee_pubkeys(height);
    auto sk = committee_secrets(height);
    for (std::uint32_t idx : b.signer_indexes) v.signer_secrets.push_back(sk[idx]);
    return v;
}

std::vector<HeaderView> ChainSim::fork_views() const {
    std::vector<HeaderView> out;
    for (const Block& b : forks_) {
        HeaderView v;
        v.header = b.header;
        v.committee = committee_pubkeys(b.header.height);
        auto sk = committee_secrets(b.header.height);
        for (std::uint32_t idx : b.signer_indexes) v.signer_secrets.push_back(sk[idx]);
        out.push_back(std::move(v));
    }
    return out;
}

MerklePath ChainSim::tx_path(std::uint64_t height, std::size_t tx_index) const {
    const BlockBody& b = body(height);
    if (tx_index >= b.txs.size()) throw std::out_of_range("chain: tx index out of range");
    return MerkleTree(b.txs).open(tx_index);
}

} // namespace zkb
