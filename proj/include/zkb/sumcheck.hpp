#pragma once

#include <cstddef>
#include <vector>

#include "zkb/field.hpp"
#include "zkb/serio.hpp"
#include "zkb/transcript.hpp"

namespace zkb {

/// One round message: f_j(t) = c0 + c1*t + c2*t^2.
struct RoundPoly {
    Fp c0, c1, c2;

    Fp eval(Fp t) const { return c0 + t * (c1 + t * c2); }
    Fp sum01() const { return c0 + c0 + c1 + c2; } // f(0) + f(1)

    friend bool operator==(const RoundPoly&, const RoundPoly&) = default;
};

struct SumcheckProof {
    Fp claimed_sum;
    std::vector<RoundPoly> rounds;

    void serialize(ByteWriter& w) const;
    static SumcheckProof deserialize(ByteReader& r);

    friend bool operator==(const SumcheckProof&, const SumcheckProof&) = default;
};

/// Sum over the boolean hypercube of A(b)*B(b) + C(b) with multilinear
/// factors given as tables. Any table may be empty (treated as zero; an
/// empty A or B drops the product term). Non-empty tables have 2^vars
/// entries. Degree per variable is at most 2, so rounds carry 3
/// coefficients.
struct QuadInstance {
    std::size_t vars = 0;
    std::vector<Fp> a, b, c;

    Fp sum() const;
    void validate() const;
};

struct SumcheckProverResult {
    SumcheckProof proof;
    std::vector<Fp> point; // bound challenges r_1..r_vars, low variable first
    Fp a_eval, b_eval, c_eval; // per-factor values at the bound point
};

/// Honest prover; absorbs the claimed sum, then each round's coefficients,
/// drawing one challenge per round. Variables are bound low-order first.
SumcheckProverResult sumcheck_prove(QuadInstance inst, Transcript& tr);

struct SumcheckVerifyResult {
    bool ok = false;
    std::vector<Fp> point;
    Fp final_value; // f(r); the caller must check this against an oracle
};

/// Replays the transcript and checks every round equation
/// f_j(0) + f_j(1) = f_{j-1}(r_{j-1}). The final oracle check is the
/// caller's responsibility via final_value.
SumcheckVerifyResult sumcheck_verify(const SumcheckProof& proof, std::size_t vars, Transcript& tr);

// ---- building blocks shared with the distributed prover ----------------

/// Round polynomial of the current tables in their lowest variable.
RoundPoly sumcheck_round_poly(const QuadInstance& inst);

/// Bind the lowest variable to r, halving every table.
void sumcheck_fold(QuadInstance& inst, Fp r);

} // namespace zkb
