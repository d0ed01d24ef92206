#include "zkb/gkr.hpp"

#include <stdexcept>

#include "zkb/mle.hpp"
#include "zkb/util.hpp"

namespace zkb {

void GkrProof::serialize(ByteWriter& w) const {
    w.fps(output);
    w.u64(layers.size());
    for (const GkrLayerProof& l : layers) {
        l.phase_x.serialize(w);
        l.phase_y.serialize(w);
        w.fp(l.claim_u);
        w.fp(l.claim_v);
    }
}

GkrProof GkrProof::deserialize(ByteReader& r) {
    GkrProof p;
    p.output = r.fps();
    std::uint64_t n = r.u64();
    if (n > 4096) throw std::invalid_argument("gkr proof: too many layers");
    p.layers.resize(n);
    for (auto& l : p.layers) {
        l.phase_x = SumcheckProof::deserialize(r);
        l.phase_y = SumcheckProof::deserialize(r);
        l.claim_u = r.fp();
        l.claim_v = r.fp();
    }
    return p;
}

void gkr_phase_x_tables(const LayeredCircuit& sub, std::size_t layer,
                        std::span<const Fp> z_weights, std::span<const Fp> w, std::span<Fp> p1,
                        std::span<Fp> p2) {
    const auto& gates = sub.layers[layer].gates;
    for (std::size_t g = 0; g < gates.size(); ++g) {
        const Gate& gate = gates[g];
        Fp zw = z_weights[g];
        if (gate.kind == Gate::Kind::Mul) {
            p1[gate.left] += zw * w[gate.right];
        } else {
            p1[gate.left] += zw * gate.a;
            p2[gate.left] += zw * (gate.b * w[gate.right] + gate.c);
        }
    }
}

void gkr_phase_y_tables(const LayeredCircuit& sub, std::size_t layer,
                        std::span<const Fp> z_weights, std::span<const Fp> beta_u, Fp wu,
                        std::span<Fp> a2, std::span<Fp> c2) {
    const auto& gates = sub.layers[layer].gates;
    for (std::size_t g = 0; g < gates.size(); ++g) {
        const Gate& gate = gates[g];
        Fp w = z_weights[g] * beta_u[gate.left];
        if (gate.kind == Gate::Kind::Mul) {
            a2[gate.right] += w * wu;
        } else {
            a2[gate.right] += w * gate.b;
            c2[gate.right] += w * (gate.a * wu + gate.c);
        }
    }
}

namespace {

// alpha1-weighted beta(u, .) plus alpha2-weighted beta(v, .)
std::vector<Fp> combined_z_weights(std::span<const Fp> u, Fp alpha1, std::span<const Fp> v,
                                   Fp alpha2) {
    auto t = beta_table_scaled(u, alpha1);
    auto t2 = beta_table_scaled(v, alpha2);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += t2[i];
    return t;
}

} // namespace

GkrProof gkr_prove(const DataParallelCircuit& c, std::span<const Fp> input, Transcript& tr) {
    c.sub.validate();
    LayerValues vals = circuit_evaluate(c, input);

    GkrProof proof;
    proof.output = vals.output();
    tr.absorb(std::span<const Fp>(proof.output));

    auto g = tr.challenge_fps(log2_exact(proof.output.size()));
    std::vector<Fp> z_weights = beta_table(g);

    for (std::size_t i = 0; i < c.depth(); ++i) {
        const auto& w = vals.layers[i + 1];
        std::size_t sz = c.sub.layers[i].gates.size();
        std::size_t sb = c.sub.fanin_size(i);

        QuadInstance phase_x{log2_exact(w.size()), std::vector<Fp>(w.size()), w,
                             std::vector<Fp>(w.size())};
        for (std::size_t copy = 0; copy < c.copies; ++copy)
            gkr_phase_x_tables(c.sub, i, std::span<const Fp>(z_weights).subspan(copy * sz, sz),
                               std::span<const Fp>(w).subspan(copy * sb, sb),
                               std::span<Fp>(phase_x.a).subspan(copy * sb, sb),
                               std::span<Fp>(phase_x.c).subspan(copy * sb, sb));
        auto resx = sumcheck_prove(std::move(phase_x), tr);
        Fp wu = resx.b_eval;

        auto beta_u = beta_table(resx.point);
        QuadInstance phase_y{log2_exact(w.size()), std::vector<Fp>(w.size()), w,
                             std::vector<Fp>(w.size())};
        for (std::size_t copy = 0; copy < c.copies; ++copy)
            gkr_phase_y_tables(c.sub, i, std::span<const Fp>(z_weights).subspan(copy * sz, sz),
                               std::span<const Fp>(beta_u).subspan(copy * sb, sb), wu,
                               std::span<Fp>(phase_y.a).subspan(copy * sb, sb),
                               std::span<Fp>(phase_y.c).subspan(copy * sb, sb));
        auto resy = sumcheck_prove(std::move(phase_y), tr);
        Fp wv = resy.b_eval;

        tr.absorb(wu);
        tr.absorb(wv);
        proof.layers.push_back({std::move(resx.proof), std::move(resy.proof), wu, wv});

        if (i + 1 < c.depth()) {
            auto alpha = tr.challenge_fps(2);
            z_weights = combined_z_weights(resx.point, alpha[0], resy.point, alpha[1]);
        }
    }
    return proof;
}

GkrLayerOutcome gkr_verify_layers(const DataParallelCircuit& c, std::span<const Fp> claimed_output,
                                  const GkrProof& proof, Transcript& tr) {
    GkrLayerOutcome out;
    if (proof.layers.size() != c.depth()) return out;
    if (claimed_output.size() != c.output_size()) return out;

    tr.absorb(claimed_output);
    auto g = tr.challenge_fps(log2_exact(claimed_output.size()));
    Fp claim = mle_evaluate(claimed_output, g);
    std::vector<Fp> z_weights = beta_table(g);

    for (std::size_t i = 0; i < c.depth(); ++i) {
        const GkrLayerProof& lp = proof.layers[i];
        std::size_t vars = log2_exact(c.fanin_size(i));

        if (lp.phase_x.claimed_sum != claim) return out;
        auto vx = sumcheck_verify(lp.phase_x, vars, tr);
        if (!vx.ok) return out;

        if (lp.phase_y.claimed_sum != vx.final_value) return out;
        auto vy = sumcheck_verify(lp.phase_y, vars, tr);
        if (!vy.ok) return out;

        WiringEval e = wiring_eval_weighted(c, i, z_weights, vx.point, vy.point);
        Fp expect = e.mult * lp.claim_u * lp.claim_v + e.add_a * lp.claim_u +
                    e.add_b * lp.claim_v + e.add_c;
        if (vy.final_value != expect) return out;

        tr.absorb(lp.claim_u);
        tr.absorb(lp.claim_v);

        if (i + 1 < c.depth()) {
            auto alpha = tr.challenge_fps(2);
            claim = alpha[0] * lp.claim_u + alpha[1] * lp.claim_v;
            z_weights = combined_z_weights(vx.point, alpha[0], vy.point, alpha[1]);
        } else {
            out.u = std::move(vx.point);
            out.v = std::move(vy.point);
            out.wu = lp.claim_u;
            out.wv = lp.claim_v;
        }
    }
    out.ok = true;
    return out;
}

bool gkr_verify(const DataParallelCircuit& c, std::span<const Fp> claimed_output,
                std::span<const Fp> input, const GkrProof& proof, Transcript& tr) {
    auto outcome = gkr_verify_layers(c, claimed_output, proof, tr);
    if (!outcome.ok) return false;
    return mle_evaluate(input, outcome.u) == outcome.wu &&
           mle_evaluate(input, outcome.v) == outcome.wv;
}

} // namespace zkb
