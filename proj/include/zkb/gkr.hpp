#pragma once

#include <span>
#include <vector>

#include "zkb/circuit.hpp"
#include "zkb/sumcheck.hpp"

namespace zkb {

/// One circuit layer reduced by a two-phase sumcheck: phase x binds the
/// left-operand variables (copy bits high), phase y the right-operand
/// variables. claim_u = V_{i+1}(u), claim_v = V_{i+1}(v) for the bound
/// points u (phase x) and v (phase y).
struct GkrLayerProof {
    SumcheckProof phase_x;
    SumcheckProof phase_y;
    Fp claim_u, claim_v;

    friend bool operator==(const GkrLayerProof&, const GkrLayerProof&) = default;
};

struct GkrProof {
    std::vector<Fp> output; // claimed output-layer values
    std::vector<GkrLayerProof> layers;

    void serialize(ByteWriter& w) const;
    static GkrProof deserialize(ByteReader& r);

    friend bool operator==(const GkrProof&, const GkrProof&) = default;
};

GkrProof gkr_prove(const DataParallelCircuit& c, std::span<const Fp> input, Transcript& tr);

/// Verifies all layer sumchecks and wiring combinations, leaving the two
/// input-layer claims V_d(u) = wu and V_d(v) = wv for the caller's input
/// oracle (raw input or a PC opening).
struct GkrLayerOutcome {
    bool ok = false;
    std::vector<Fp> u, v;
    Fp wu, wv;
};

GkrLayerOutcome gkr_verify_layers(const DataParallelCircuit& c, std::span<const Fp> claimed_output,
                                  const GkrProof& proof, Transcript& tr);

/// Full verification against the raw input vector (Protocol 5 oracle).
bool gkr_verify(const DataParallelCircuit& c, std::span<const Fp> claimed_output,
                std::span<const Fp> input, const GkrProof& proof, Transcript& tr);

// ---- phase-table construction, shared with the distributed prover ------

/// Phase-x tables over the layer-below values w: the sumcheck instance is
/// sum_x P1(x)*W(x) + P2(x) for the z-weighted layer equation.
void gkr_phase_x_tables(const LayeredCircuit& sub, std::size_t layer,
                        std::span<const Fp> z_weights, // per-copy slice, size S_i
                        std::span<const Fp> w,         // per-copy slice of V_{i+1}
                        std::span<Fp> p1, std::span<Fp> p2);

/// Phase-y tables after binding x = u: sum_y A2(y)*W(y) + C2(y).
void gkr_phase_y_tables(const LayeredCircuit& sub, std::size_t layer,
                        std::span<const Fp> z_weights, std::span<const Fp> beta_u, Fp wu,
                        std::span<Fp> a2, std::span<Fp> c2);

} // namespace zkb
