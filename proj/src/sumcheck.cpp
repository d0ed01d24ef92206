#include "zkb/sumcheck.hpp"

#include <stdexcept>

namespace zkb {

void SumcheckProof::serialize(ByteWriter& w) const {
    w.fp(claimed_sum);
    w.u64(rounds.size());
    for (const RoundPoly& r : rounds) {
        w.fp(r.c0);
        w.fp(r.c1);
        w.fp(r.c2);
    }
}

SumcheckProof SumcheckProof::deserialize(ByteReader& r) {
    SumcheckProof p;
    p.claimed_sum = r.fp();
    std::uint64_t n = r.u64();
    if (n > 64) throw std::invalid_argument("sumcheck proof: too many rounds");
    p.rounds.resize(n);
    for (auto& rp : p.rounds) {
        rp.c0 = r.fp();
        rp.c1 = r.fp();
        rp.c2 = r.fp();
    }
    return p;
}

void QuadInstance::validate() const {
    std::size_t n = std::size_t{1} << vars;
    if (!a.empty() && a.size() != n) throw std::invalid_argument("sumcheck: bad A table size");
    if (!b.empty() && b.size() != n) throw std::invalid_argument("sumcheck: bad B table size");
    if (!c.empty() && c.size() != n) throw std::invalid_argument("sumcheck: bad C table size");
    if (a.empty() != b.empty()) throw std::invalid_argument("sumcheck: A and B must pair up");
}

Fp QuadInstance::sum() const {
    Fp acc = Fp::zero();
    if (!a.empty())
        for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    for (Fp x : c) acc += x;
    return acc;
}

RoundPoly sumcheck_round_poly(const QuadInstance& inst) {
    std::size_t half = (std::size_t{1} << inst.vars) / 2;
    RoundPoly out{};
    // pairs (2i, 2i+1): value at t is v0 + t*(v1 - v0)
    if (!inst.a.empty()) {
        for (std::size_t i = 0; i < half; ++i) {
            Fp a0 = inst.a[2 * i], da = inst.a[2 * i + 1] - a0;
            Fp b0 = inst.b[2 * i], db = inst.b[2 * i + 1] - b0;
            out.c0 += a0 * b0;
            out.c1 += a0 * db + b0 * da;
            out.c2 += da * db;
        }
    }
    if (!inst.c.empty()) {
        for (std::size_t i = 0; i < half; ++i) {
            out.c0 += inst.c[2 * i];
            out.c1 += inst.c[2 * i + 1] - inst.c[2 * i];
        }
    }
    return out;
}

void sumcheck_fold(QuadInstance& inst, Fp r) {
    auto fold = [&](std::vector<Fp>& t) {
        if (t.empty()) return;
        std::size_t half = t.size() / 2;
        for (std::size_t i = 0; i < half; ++i) t[i] = t[2 * i] + r * (t[2 * i + 1] - t[2 * i]);
        t.resize(half);
    };
    fold(inst.a);
    fold(inst.b);
    fold(inst.c);
    --inst.vars;
}

SumcheckProverResult sumcheck_prove(QuadInstance inst, Transcript& tr) {
    inst.validate();
    SumcheckProverResult res;
    res.proof.claimed_sum = inst.sum();
    tr.absorb(res.proof.claimed_sum);
    while (inst.vars > 0) {
        RoundPoly rp = sumcheck_round_poly(inst);
        std::vector<Fp> coeffs{rp.c0, rp.c1, rp.c2};
        tr.absorb(std::span<const Fp>(coeffs));
        Fp r = tr.challenge_fp();
        sumcheck_fold(inst, r);
        res.proof.rounds.push_back(rp);
        res.point.push_back(r);
    }
    res.a_eval = inst.a.empty() ? Fp::zero() : inst.a[0];
    res.b_eval = inst.b.empty() ? Fp::zero() : inst.b[0];
    res.c_eval = inst.c.empty() ? Fp::zero() : inst.c[0];
    return res;
}

SumcheckVerifyResult sumcheck_verify(const SumcheckProof& proof, std::size_t vars, Transcript& tr) {
    SumcheckVerifyResult res;
    if (proof.rounds.size() != vars) return res;
    tr.absorb(proof.claimed_sum);
    Fp running = proof.claimed_sum;
    for (const RoundPoly& rp : proof.rounds) {
        if (rp.sum01() != running) return res;
        std::vector<Fp> coeffs{rp.c0, rp.c1, rp.c2};
        tr.absorb(std::span<const Fp>(coeffs));
        Fp r = tr.challenge_fp();
        running = rp.eval(r);
        res.point.push_back(r);
    }
    res.final_value = running;
    res.ok = true;
    return res;
}

} // namespace zkb
