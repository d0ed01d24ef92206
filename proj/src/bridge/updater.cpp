#include "zkb/bridge/updater.hpp"

#include <algorithm>
#include <stdexcept>

#include "zkb/lightcc.hpp"
#include "zkb/util.hpp"

namespace zkb {

namespace {

constexpr std::uint32_t SNAPSHOT_VERSION = 1;

std::vector<std::uint8_t> digest_bytes(const Digest& d) { return {d.begin(), d.end()}; }

} // namespace

void RelayEnvelope::serialize(ByteWriter& w) const {
    w.u64(headers.size());
    for (const auto& h : headers) h.serialize(w);
    w.digest(parent);
    w.u64(committees.size());
    for (const auto& c : committees) w.fps(c);
    w.blob(proof);
    w.blob(identity);
}

RelayEnvelope RelayEnvelope::deserialize(ByteReader& r) {
    RelayEnvelope e;
    std::uint64_t n = r.u64();
    if (n > 4096) throw std::invalid_argument("envelope: too many headers");
    for (std::uint64_t i = 0; i < n; ++i) e.headers.push_back(BlockHeader::deserialize(r));
    e.parent = r.digest();
    std::uint64_t m = r.u64();
    if (m > 4096) throw std::invalid_argument("envelope: too many committees");
    for (std::uint64_t i = 0; i < m; ++i) e.committees.push_back(r.fps());
    e.proof = r.blob();
    e.identity = r.blob();
    return e;
}

// ---- statement ----------------------------------------------------------

std::size_t header_copies(std::size_t committee_size) {
    std::size_t n = 1;
    while (n < committee_size) n <<= 1;
    return n;
}

DataParallelCircuit header_statement_circuit(std::size_t n_headers, std::size_t committee_size) {
    return build_light_client_circuit(n_headers * header_copies(committee_size));
}

std::vector<Fp> header_public_inputs(std::span<const BlockHeader> headers,
                                     std::span<const std::vector<Fp>> committees,
                                     std::size_t committee_size) {
    if (headers.size() != committees.size())
        throw std::invalid_argument("statement: one committee per header required");
    std::size_t per = header_copies(committee_size);
    std::vector<Fp> out;
    out.reserve(headers.size() * per * 4);
    for (std::size_t i = 0; i < headers.size(); ++i) {
        const auto& sigs = headers[i].signatures;
        if (sigs.empty()) throw std::invalid_argument("statement: unsigned header");
        Fp msg = digest_to_field(headers[i].digest());
        for (std::size_t j = 0; j < per; ++j) {
            auto [idx, sig] = sigs[j < sigs.size() ? j : 0];
            if (idx >= committees[i].size())
                throw std::invalid_argument("statement: signer index out of range");
            out.push_back(msg);
            out.push_back(committees[i][idx]);
            out.push_back(sig);
            out.push_back(Fp::one());
        }
    }
    return out;
}

// ---- DAG ----------------------------------------------------------------

std::vector<BlockHeader> main_chain(const HeaderDag& dag, std::size_t K) {
    const Digest* best = nullptr;
    std::uint64_t best_weight = 0;
    for (const auto& [d, node] : dag.nodes) {
        // map order is ascending digest, so on equal weight the first
        // (smaller) digest wins
        if (!best || node.weight > best_weight) {
            best = &d;
            best_weight = node.weight;
        }
    }
    std::vector<BlockHeader> chain;
    if (!best) return chain;
    Digest cur = *best;
    while (true) {
        const DagNode& node = dag.nodes.at(cur);
        chain.push_back(node.header);
        if (cur == dag.genesis) break;
        cur = node.header.parent;
    }
    std::reverse(chain.begin(), chain.end());
    std::size_t keep = chain.size() > K ? chain.size() - K : 1;
    chain.resize(keep);
    return chain;
}

// ---- updater ------------------------------------------------------------

Updater::Updater(const BlockHeader& genesis, const UpdaterParams& params) : params_(params) {
    if (params_.quorum == 0 || params_.quorum > params_.committee_size)
        throw std::invalid_argument("updater: quorum out of range");
    Digest g = genesis.digest();
    dag_.genesis = g;
    dag_.nodes.emplace(g, DagNode{genesis, {}, 1});
    refresh_lcs();
}

void Updater::refresh_lcs() {
    auto chain = main_chain(dag_, 0);
    const BlockHeader& tip = chain.back();
    lcs_.committee_commitment = tip.validator_commitment;
    lcs_.latest = tip.digest();
    lcs_.height = tip.height;
    lcs_.committee_size = params_.committee_size;
    lcs_.quorum = params_.quorum;
}

bool Updater::header_update(const RelayEnvelope& env) {
    dag_ops_ = 0;
    bool ok;
    try {
        ok = apply(env);
    } catch (const std::exception&) {
        ok = false;
    }
    ++(ok ? accepted_ : rejected_);
    return ok;
}

bool Updater::apply(const RelayEnvelope& env) {
    if (env.headers.empty() || !is_power_of_two(env.headers.size())) return false;
    if (env.committees.size() != env.headers.size()) return false;

    ++dag_ops_;
    auto parent_it = dag_.nodes.find(env.parent);
    if (parent_it == dag_.nodes.end()) return false; // skip: parent not in the DAG

    // idempotent re-submission of an already-known run
    bool all_known = true;
    for (const auto& h : env.headers) {
        ++dag_ops_;
        if (!dag_.contains(h.digest())) {
            all_known = false;
            break;
        }
    }
    if (all_known) return true;

    // structural light-client rule along the run
    const BlockHeader* prev = &parent_it->second.header;
    for (std::size_t i = 0; i < env.headers.size(); ++i) {
        LightClientState view;
        view.committee_commitment = prev->validator_commitment;
        view.latest = prev->digest();
        view.height = prev->height;
        view.committee_size = params_.committee_size;
        view.quorum = params_.quorum;
        if (!light_cc_public(view, *prev, env.headers[i], env.committees[i])) return false;
        prev = &env.headers[i];
    }

    // the proved half: every quorum signature in the run
    auto circuit = header_statement_circuit(env.headers.size(), params_.committee_size);
    auto publics = header_public_inputs(env.headers, env.committees, params_.committee_size);
    std::vector<Fp> claimed(circuit.output_size(), Fp::one());
    auto proof = DeVirgoProof::deserialize(env.proof);
    Transcript tr(HEADER_PROOF_LABEL, env.identity);
    if (!devirgo_verify(circuit, claimed, publics, proof, params_.proof, tr)) return false;

    // all-or-nothing insertion
    std::uint64_t weight = parent_it->second.weight;
    for (std::size_t i = 0; i < env.headers.size(); ++i) {
        ++dag_ops_;
        dag_.nodes.emplace(env.headers[i].digest(),
                           DagNode{env.headers[i], env.committees[i], ++weight});
    }
    std::vector<std::vector<std::uint8_t>> leaves;
    for (const auto& h : env.headers) leaves.push_back(digest_bytes(h.digest()));
    dag_.batch_roots.emplace(dag_.batch_roots.size(), mt_commit(leaves));
    refresh_lcs();
    return true;
}

std::optional<std::pair<BlockHeader, LightClientState>> Updater::get_header(
    std::uint64_t height) const {
    auto chain = main_chain(dag_, 0);
    for (const auto& h : chain)
        if (h.height == height) return {{h, lcs_}};
    for (const auto& [d, node] : dag_.nodes)
        if (node.header.height == height) return {{node.header, lcs_}};
    return std::nullopt; // unknown yet: caller should wait
}

bool Updater::on_main_chain(const Digest& d) const {
    for (const auto& h : main_chain(dag_, params_.confirm_depth))
        if (h.digest() == d) return true;
    return false;
}

bool Updater::verify_tx_inclusion(std::uint64_t height, std::span<const std::uint8_t> tx,
                                  const MerklePath& path) const {
    for (const auto& h : main_chain(dag_, params_.confirm_depth))
        if (h.height == height) return mt_verify(path, tx, h.tx_root);
    return false;
}

std::vector<std::uint8_t> Updater::snapshot() const {
    ByteWriter w;
    w.u32(0x55424b5a); // "ZKBU"
    w.u32(SNAPSHOT_VERSION);
    w.u64(params_.committee_size);
    w.u64(params_.quorum);
    w.u64(params_.confirm_depth);
    w.u64(params_.proof.rho);
    w.u64(params_.proof.queries);
    w.digest(dag_.genesis);
    lcs_.serialize(w);
    w.u64(dag_.nodes.size());
    for (const auto& [d, node] : dag_.nodes) {
        w.digest(d);
        node.header.serialize(w);
        w.fps(node.committee);
        w.u64(node.weight);
    }
    w.u64(dag_.batch_roots.size());
    for (const auto& [idx, root] : dag_.batch_roots) {
        w.u64(idx);
        w.digest(root.digest);
    }
    return w.bytes;
}

Updater Updater::restore(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    if (r.u32() != 0x55424b5a) throw std::invalid_argument("snapshot: bad magic");
    if (r.u32() != SNAPSHOT_VERSION) throw std::invalid_argument("snapshot: unknown version");
    UpdaterParams p;
    p.committee_size = r.u64();
    p.quorum = r.u64();
    p.confirm_depth = r.u64();
    p.proof.rho = r.u64();
    p.proof.queries = r.u64();
    Digest genesis_digest = r.digest();
    LightClientState lcs = LightClientState::deserialize(r);

    HeaderDag dag;
    dag.genesis = genesis_digest;
    std::uint64_t n = r.u64();
    if (n == 0 || n > (std::uint64_t{1} << 32)) throw std::invalid_argument("snapshot: bad node count");
    BlockHeader genesis_header;
    for (std::uint64_t i = 0; i < n; ++i) {
        Digest d = r.digest();
        DagNode node;
        node.header = BlockHeader::deserialize(r);
        node.committee = r.fps();
        node.weight = r.u64();
        if (node.header.digest() != d) throw std::invalid_argument("snapshot: header digest mismatch");
        if (d == genesis_digest) genesis_header = node.header;
        dag.nodes.emplace(d, std::move(node));
    }
    std::uint64_t b = r.u64();
    if (b > (std::uint64_t{1} << 32)) throw std::invalid_argument("snapshot: bad batch count");
    for (std::uint64_t i = 0; i < b; ++i) {
        std::uint64_t idx = r.u64();
        dag.batch_roots.emplace(idx, MerkleRoot{r.digest()});
    }
    if (!r.done()) throw std::invalid_argument("snapshot: trailing bytes");
    if (!dag.contains(genesis_digest)) throw std::invalid_argument("snapshot: genesis missing");

    Updater u(genesis_header, p);
    u.dag_ = std::move(dag);
    u.lcs_ = lcs;
    return u;
}

} // namespace zkb
