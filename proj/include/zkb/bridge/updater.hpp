#pragma once

#include <map>
#include <optional>

#include "zkb/bridge/chain.hpp"
#include "zkb/devirgo.hpp"

namespace zkb {

/// What a relay submits: a parent-linked run of headers (one for ordinary
/// updates, B for a batch) with the signing committee key lists and a single
/// proof of every signature in the run. The prover identity is bound into
/// the proof transcript, so envelopes are unstealable.
struct RelayEnvelope {
    std::vector<BlockHeader> headers;
    Digest parent{}; // digest of the header the run extends
    std::vector<std::vector<Fp>> committees; // signing committee per header
    std::vector<std::uint8_t> proof;         // serialized witness argument
    std::vector<std::uint8_t> identity;

    void serialize(ByteWriter& w) const;
    static RelayEnvelope deserialize(ByteReader& r);

    friend bool operator==(const RelayEnvelope&, const RelayEnvelope&) = default;
};

// ---- the proved statement ----------------------------------------------

inline constexpr const char* HEADER_PROOF_LABEL = "zkb.bridge.header";

/// Signature copies per header: every header's signature list is padded to
/// the next power of two of the committee size by repeating the first
/// signature, so batches stay uniformly data-parallel.
std::size_t header_copies(std::size_t committee_size);

DataParallelCircuit header_statement_circuit(std::size_t n_headers, std::size_t committee_size);

/// Concatenated per-copy public inputs [msg, pk, sig, 1] for all headers;
/// both the relay and the updater derive these from the envelope alone.
std::vector<Fp> header_public_inputs(std::span<const BlockHeader> headers,
                                     std::span<const std::vector<Fp>> committees,
                                     std::size_t committee_size);

// ---- header DAG ---------------------------------------------------------

struct DagNode {
    BlockHeader header;
    std::vector<Fp> committee; // signing committee of this header (empty for genesis)
    std::uint64_t weight = 0;  // cumulative; every header weighs 1

    friend bool operator==(const DagNode&, const DagNode&) = default;
};

struct HeaderDag {
    Digest genesis{};
    std::map<Digest, DagNode> nodes;
    std::map<std::uint64_t, MerkleRoot> batch_roots; // batch index -> root over header digests

    bool contains(const Digest& d) const { return nodes.count(d) != 0; }

    friend bool operator==(const HeaderDag&, const HeaderDag&) = default;
};

/// Maximum-cumulative-weight path from genesis, ties broken by the smaller
/// tip digest, with the last K headers truncated (never dropping genesis).
std::vector<BlockHeader> main_chain(const HeaderDag& dag, std::size_t K);

// ---- updater contract state machine ------------------------------------

struct UpdaterParams {
    std::size_t committee_size = 4;
    std::size_t quorum = 3;
    std::size_t confirm_depth = 2; // K
    DeVirgoParams proof{8, 16};
};

class Updater {
public:
    Updater(const BlockHeader& genesis, const UpdaterParams& params);

    /// Applies one envelope: rejects unless the parent is already in the
    /// DAG, the run is parent-linked, the committees match the rotation
    /// commitments, the structural light-client checks pass for every
    /// header, and the proof verifies. All-or-nothing; duplicate runs are
    /// accepted idempotently. Batches additionally record a Merkle root
    /// over the run's header digests.
    bool header_update(const RelayEnvelope& env);

    std::optional<std::pair<BlockHeader, LightClientState>> get_header(std::uint64_t height) const;
    bool on_main_chain(const Digest& d) const;

    /// True iff a header at `height` sits on the main chain at confirmation
    /// depth >= K and the path proves tx under its tx_root.
    bool verify_tx_inclusion(std::uint64_t height, std::span<const std::uint8_t> tx,
                             const MerklePath& path) const;

    const LightClientState& lcs() const { return lcs_; }
    const HeaderDag& dag() const { return dag_; }
    const UpdaterParams& params() const { return params_; }
    std::vector<BlockHeader> chain() const { return main_chain(dag_, params_.confirm_depth); }

    std::uint64_t accepted_count() const { return accepted_; }
    std::uint64_t rejected_count() const { return rejected_; }
    /// DAG accesses performed by the last header_update; constant in the
    /// chain length for a fixed batch size.
    std::uint64_t last_update_dag_ops() const { return dag_ops_; }

    /// Versioned binary snapshot of the full contract state; a pure
    /// function of the accepted-envelope sequence.
    std::vector<std::uint8_t> snapshot() const;
    static Updater restore(std::span<const std::uint8_t> bytes);

private:
    bool apply(const RelayEnvelope& env);
    void refresh_lcs();

    UpdaterParams params_;
    HeaderDag dag_;
    LightClientState lcs_;
    std::uint64_t accepted_ = 0, rejected_ = 0, dag_ops_ = 0;
};

} // namespace zkb
