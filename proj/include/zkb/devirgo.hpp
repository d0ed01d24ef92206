#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zkb/circuit.hpp"
#include "zkb/gkr.hpp"
#include "zkb/pc.hpp"
#include "zkb/transport.hpp"

namespace zkb {

/// Cluster shape: `workers` machines proving a `copies`-way data-parallel
/// circuit; worker j owns the contiguous copy range [j*copies/workers,
/// (j+1)*copies/workers). Both counts are powers of two, workers <= copies.
struct ClusterConfig {
    std::size_t workers = 1;
    std::size_t copies = 1;
    std::vector<std::string> endpoints;     // worker host:port list (TCP mode)
    std::vector<std::uint8_t> identity;     // prover identity bound into the transcript

    void validate() const;
    Digest config_hash() const; // bound into the transport handshake
};

// Frame tags of the coordinator/worker protocol.
inline constexpr std::uint8_t TAG_SETUP = 0x10;
inline constexpr std::uint8_t TAG_OUTPUT = 0x11;
inline constexpr std::uint8_t TAG_LAYER = 0x12;
inline constexpr std::uint8_t TAG_PHASE_Y = 0x13;
inline constexpr std::uint8_t TAG_SC_SUM = 0x14;
inline constexpr std::uint8_t TAG_SC_POLY = 0x15;
inline constexpr std::uint8_t TAG_SC_CHAL = 0x16;
inline constexpr std::uint8_t TAG_SC_TABLES = 0x17;
inline constexpr std::uint8_t TAG_PC_EVAL = 0x18;
inline constexpr std::uint8_t TAG_PC_YS = 0x19;
inline constexpr std::uint8_t TAG_PC_GAMMA = 0x1a;
inline constexpr std::uint8_t TAG_PC_H = 0x1b;
inline constexpr std::uint8_t TAG_FINISH = 0x1c;
inline constexpr std::uint8_t TAG_STATS = 0x1d;

// ---- distributed sumcheck ----------------------------------------------

struct DistSumcheckResult {
    SumcheckProof proof;
    std::vector<Fp> point;     // low-variable challenges, then copy-variable ones
    Fp a_eval, b_eval, c_eval; // per-factor values at the bound point
};

/// Coordinator side of one distributed sumcheck on sum_x A(x)B(x) + C(x)
/// whose copy variables sit in the HIGH positions. Each worker holds the
/// instance slice for its copies and must currently be inside
/// sumcheck_phase_serve. Rounds 1..low_vars: workers send round polynomials,
/// the coordinator sums them, absorbs, and relays the challenge. Then
/// workers ship their residual tables and the coordinator finishes the last
/// high_vars rounds on the stitched-together f' tables alone. The resulting
/// proof is byte-identical to sumcheck_prove on the global instance.
DistSumcheckResult dist_sumcheck_run(std::span<Channel* const> workers, std::size_t low_vars,
                                     std::size_t high_vars, bool has_ab, bool has_c,
                                     Transcript& tr);

/// Worker side: serves the low_vars relay rounds on a local instance slice,
/// then ships the residual tables (one entry per owned copy). Returns the
/// low-variable challenges, which later phases of a caller may need.
std::vector<Fp> sumcheck_phase_serve(Channel& ch, QuadInstance inst, std::size_t low_vars);

// ---- distributed (column-aggregated) polynomial commitment -------------

struct DistPcParams {
    std::size_t copies = 1;
    PcParams base; // per-copy table shape and FRI parameters

    void validate() const;
};

struct DistPcCommitment {
    MerkleRoot root; // top tree over per-column roots

    friend bool operator==(const DistPcCommitment&, const DistPcCommitment&) = default;
};

/// Column k of a row set holds one value per copy; its root is a Merkle
/// root over those single-element leaves, and the top tree commits to all
/// column roots at once.
Digest column_root(std::span<const Fp> bundle);

struct ColumnTree {
    std::vector<Digest> roots;
    MerkleTree top;
};

ColumnTree column_commit(const std::vector<std::vector<Fp>>& rows);

/// One opened column: the whole per-copy bundle plus a single top-tree
/// path, regardless of the copy count.
struct ColumnOpening {
    std::vector<Fp> values; // copy order
    MerklePath path;

    friend bool operator==(const ColumnOpening&, const ColumnOpening&) = default;
};

struct DistPcProverState {
    DistPcParams params;
    std::vector<std::vector<Fp>> tables;   // per-copy MLE tables
    std::vector<std::vector<Fp>> f_coeffs; // per-copy univariate coefficients
    std::vector<std::vector<Fp>> rows;     // per-copy evaluations on L
    ColumnTree tree;
};

std::pair<DistPcCommitment, DistPcProverState> dist_pc_commit(const DistPcParams& params,
                                                              std::vector<std::vector<Fp>> tables);

ColumnOpening dist_open_column(const DistPcProverState& state, std::size_t index);
bool dist_verify_column(const DistPcCommitment& com, std::size_t index, std::size_t copies,
                        const ColumnOpening& opening);

struct DistPcQuery {
    ColumnOpening f_lo, f_hi;
    ColumnOpening h_lo, h_hi;
    std::vector<std::array<ColumnOpening, 2>> fold; // layers 1..t-1

    friend bool operator==(const DistPcQuery&, const DistPcQuery&) = default;
};

struct DistPcOpeningProof {
    std::vector<Fp> ys_u; // per-copy evaluations at the first point
    std::vector<Fp> ys_v; // second point (empty for single-point openings)
    MerkleRoot h_root;
    std::vector<MerkleRoot> fold_roots;
    std::vector<std::vector<Fp>> final_layers; // per copy, in the clear
    std::vector<DistPcQuery> queries;

    std::size_t opened_path_count() const; // top-tree paths across all queries
    std::size_t opened_hash_count() const; // sibling digests across all paths
    void serialize(ByteWriter& w) const;
    static DistPcOpeningProof deserialize(ByteReader& r);

    friend bool operator==(const DistPcOpeningProof&, const DistPcOpeningProof&) = default;
};

/// Single global point r = (per-copy variables low, copy index high).
DistPcOpeningProof dist_pc_open(const DistPcProverState& state, std::span<const Fp> r,
                                Transcript& tr);

DistPcOpeningProof dist_pc_batch_open(const DistPcProverState& state, std::span<const Fp> u,
                                      std::span<const Fp> v, Transcript& tr);

/// On success carries the aggregated evaluations
/// y = sum_i beta(r_high, i) * y_i recomputed from the per-copy openings.
struct DistPcVerifyResult {
    bool ok = false;
    Fp y_u, y_v;
};

DistPcVerifyResult dist_pc_verify(const DistPcCommitment& com, const DistPcParams& params,
                                  std::span<const Fp> r, const DistPcOpeningProof& proof,
                                  Transcript& tr);

DistPcVerifyResult dist_pc_batch_verify(const DistPcCommitment& com, const DistPcParams& params,
                                        std::span<const Fp> u, std::span<const Fp> v,
                                        const DistPcOpeningProof& proof, Transcript& tr);

// Naive per-copy baseline: one Merkle tree per copy, so opening a column
// costs one path per copy. Kept for the aggregation-law comparison.
struct NaiveDistPc {
    std::vector<PcCommitment> coms;
    std::vector<PcProverState> states;
};

NaiveDistPc naive_dist_pc_commit(const DistPcParams& params,
                                 const std::vector<std::vector<Fp>>& tables);

struct NaiveColumnOpening {
    std::vector<Fp> values;
    std::vector<MerklePath> paths; // one per copy

    std::size_t hash_count() const;
};

NaiveColumnOpening naive_open_column(const NaiveDistPc& pc, std::size_t index);
bool naive_verify_column(const NaiveDistPc& pc, std::size_t index,
                         const NaiveColumnOpening& opening);

// ---- the full argument -------------------------------------------------

struct DeVirgoParams {
    std::size_t rho = 8;
    std::size_t queries = 16;
};

struct DeVirgoProof {
    DistPcCommitment witness_com;
    GkrProof gkr;
    DistPcOpeningProof opening; // batch opening of the witness at (u, v)

    std::vector<std::uint8_t> serialize() const;
    static DeVirgoProof deserialize(std::span<const std::uint8_t> bytes);

    friend bool operator==(const DeVirgoProof&, const DeVirgoProof&) = default;
};

/// Single-machine reference prover (also the copies = 1 path). The input is
/// the concatenated per-copy inputs; each copy's witness half (or the whole
/// input when the circuit has no public inputs) goes into the distributed-
/// format commitment, which is absorbed before any challenge is drawn.
DeVirgoProof virgo_prove(const DataParallelCircuit& c, std::span<const Fp> input,
                         const DeVirgoParams& params, Transcript& tr);

struct WorkerStats {
    std::uint64_t gates_evaluated = 0;
};

/// Coordinator over live worker channels; produces bytes identical to
/// virgo_prove on the same circuit, input and transcript.
DeVirgoProof devirgo_prove(std::span<Channel* const> workers, const DataParallelCircuit& c,
                           std::span<const Fp> input, const DeVirgoParams& params, Transcript& tr,
                           std::vector<WorkerStats>* stats = nullptr);

/// Worker loop for one proof session: setup, per-layer sumcheck phases,
/// witness-opening phase, finish. Returns after TAG_FINISH.
WorkerStats devirgo_worker(Channel& ch);

/// Verifies the layer sumchecks, the wiring combinations, the aggregated
/// witness opening, and the public-input binding of the two input-layer
/// claims. public_inputs is the concatenation of the per-copy public
/// slices (empty when the circuit has none).
bool devirgo_verify(const DataParallelCircuit& c, std::span<const Fp> claimed_output,
                    std::span<const Fp> public_inputs, const DeVirgoProof& proof,
                    const DeVirgoParams& params, Transcript& tr);

/// Proof post-processing hook (recursive compression lives outside this
/// codebase); the default implementation is the identity on proof bytes.
class Compressor {
public:
    virtual ~Compressor() = default;

    struct Envelope {
        std::vector<std::uint8_t> payload;
        std::size_t inner_size = 0;
    };

    virtual Envelope compress(const DeVirgoProof& proof) const;
};

} // namespace zkb
