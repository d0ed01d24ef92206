#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "zkb/domain.hpp"
#include "zkb/merkle.hpp"
#include "zkb/mle.hpp"
#include "zkb/serio.hpp"
#include "zkb/transcript.hpp"

namespace zkb {

/// Commit a 2^vars multilinear table by reading it as evaluations of a
/// univariate f_U on H, evaluating f_U on the disjoint coset L (|L| =
/// rho*|H|), and Merkle-committing the L-evaluations. Openings run the
/// univariate-sumcheck decomposition plus FRI degree testing.
struct PcParams {
    std::size_t vars = 0;
    std::size_t rho = 8;
    std::size_t queries = 16;

    static constexpr std::size_t FRI_FINAL_MAX = 16;

    std::size_t h_order() const { return std::size_t{1} << vars; }
    std::size_t l_order() const { return rho << vars; }
    // number of FRI fold steps until the layer fits in the clear
    std::size_t fold_count() const {
        std::size_t t = 0;
        while ((l_order() >> t) > FRI_FINAL_MAX) ++t;
        return t;
    }
    void validate() const;

    friend bool operator==(const PcParams&, const PcParams&) = default;
};

struct PcCommitment {
    MerkleRoot root;

    friend bool operator==(const PcCommitment&, const PcCommitment&) = default;
};

struct PcProverState {
    PcParams params;
    std::vector<Fp> table;    // the committed MLE table (f_U on H)
    std::vector<Fp> f_coeffs; // f_U coefficients
    std::vector<Fp> f_l;      // f_U on L
    MerkleTree tree;          // over f_l
};

std::pair<PcCommitment, PcProverState> pc_commit(const MultilinearTable& table,
                                                 const PcParams& params);

/// One spot check: openings of f_L and h_L at the paired positions
/// (p, p + M/2), then pairs for each committed fold layer.
struct PcQuery {
    Fp f_lo, f_hi;
    MerklePath f_path_lo, f_path_hi;
    Fp h_lo, h_hi;
    MerklePath h_path_lo, h_path_hi;
    std::vector<std::array<Fp, 2>> fold_values;       // layers 1..t-1
    std::vector<std::array<MerklePath, 2>> fold_paths;

    friend bool operator==(const PcQuery&, const PcQuery&) = default;
};

struct PcOpeningProof {
    MerkleRoot h_root;
    std::vector<MerkleRoot> fold_roots; // layers 1..t-1
    std::vector<Fp> final_layer;        // layer t in the clear
    std::vector<PcQuery> queries;

    std::size_t opened_path_count() const;
    void serialize(ByteWriter& w) const;
    static PcOpeningProof deserialize(ByteReader& r);

    friend bool operator==(const PcOpeningProof&, const PcOpeningProof&) = default;
};

/// Expected opened-path count for honest proofs with these parameters.
std::size_t pc_expected_paths(const PcParams& params);

std::pair<Fp, PcOpeningProof> pc_open(const PcProverState& state, std::span<const Fp> r,
                                      Transcript& tr);

bool pc_verify(const PcCommitment& com, std::span<const Fp> r, Fp y, const PcOpeningProof& proof,
               const PcParams& params, Transcript& tr);

struct PcBatchOpening {
    Fp y_u, y_v;
    PcOpeningProof proof;
};

/// Two evaluation claims combined into one decomposition with a
/// transcript-drawn scalar.
PcBatchOpening pc_batch_open(const PcProverState& state, std::span<const Fp> u,
                             std::span<const Fp> v, Transcript& tr);

bool pc_batch_verify(const PcCommitment& com, std::span<const Fp> u, std::span<const Fp> v,
                     Fp y_u, Fp y_v, const PcOpeningProof& proof, const PcParams& params,
                     Transcript& tr);

// ---- internals shared with the distributed PC --------------------------

namespace pc_detail {

/// h and g with f_U(x)*w(x) = h(x)*(x^m - 1) + x*g(x) + y/m, where w
/// interpolates `eq_on_h` over H. Returns y = sum_H f_U(a)*w(a) as a
/// byproduct.
struct UniDecomp {
    std::vector<Fp> h_coeffs; // size m, degree <= m-2 honest
    std::vector<Fp> g_coeffs; // size m-1
    Fp y;
};
UniDecomp univariate_decompose(std::span<const Fp> f_coeffs, std::span<const Fp> eq_on_h);

/// w(x) for arbitrary x from the values of w on H (Lagrange over the
/// subgroup).
Fp weight_eval(std::span<const Fp> eq_on_h, Fp x);

/// G = x*(h + delta*g) as coefficients (size m).
std::vector<Fp> combine_hg(const UniDecomp& d, Fp delta);

/// Verifier-side layer-0 value: x*h + delta*(f*w - h*(x^m-1) - y/m).
Fp derive_g0(Fp x, Fp f_val, Fp h_val, Fp w_val, Fp zh, Fp delta, Fp y_over_m);

/// One FRI fold: input layer on offset*<gen> (size even), output on
/// offset^2*<gen^2>: out[j] = (a+b)/2 + chal*(a-b)/(2*x_j).
std::vector<Fp> fri_fold(std::span<const Fp> layer, Fp chal, Fp offset, Fp gen);

/// Fold applied to a single pair of values at position p (x = offset*gen^p).
Fp fri_fold_pair(Fp lo, Fp hi, Fp chal, Fp x);

/// Checks that the clear final layer is the evaluation of a polynomial of
/// degree < bound on its domain.
bool final_layer_low_degree(std::span<const Fp> layer, Fp offset, std::size_t bound);

std::vector<std::uint8_t> fp_leaf(Fp v);

} // namespace pc_detail

} // namespace zkb
