#include "zkb/devirgo.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "zkb/domain.hpp"
#include "zkb/mle.hpp"
#include "zkb/util.hpp"

namespace zkb {

using namespace pc_detail;

namespace {

Frame recv_expect(Channel& ch, std::uint8_t tag, std::size_t worker) {
    Frame f;
    try {
        f = ch.receive();
    } catch (const ProtocolError& e) {
        throw ProtocolError("worker " + std::to_string(worker) + ": " + e.what());
    }
    if (f.tag != tag)
        throw ProtocolError("worker " + std::to_string(worker) + ": unexpected frame tag " +
                            std::to_string(f.tag) + " (wanted " + std::to_string(tag) + ")");
    return f;
}

void reader_done(ByteReader& r, const char* what) {
    if (!r.done()) throw ProtocolError(std::string("trailing bytes in ") + what + " frame");
}

void write_path(ByteWriter& w, const MerklePath& p) {
    auto b = p.serialize();
    w.bytes.insert(w.bytes.end(), b.begin(), b.end());
}

MerklePath read_path(ByteReader& r) {
    std::size_t consumed = 0;
    auto p = MerklePath::deserialize(r.rest(), &consumed);
    r.skip(consumed);
    return p;
}

} // namespace

// ---- cluster ------------------------------------------------------------

void ClusterConfig::validate() const {
    if (!is_power_of_two(workers) || !is_power_of_two(copies))
        throw std::invalid_argument("cluster: worker and copy counts must be powers of two");
    if (workers > copies) throw std::invalid_argument("cluster: more workers than copies");
}

Digest ClusterConfig::config_hash() const {
    Hasher h;
    h.update(bytes_of(std::string("zkb.cluster.v1")));
    h.update_u64le(workers);
    h.update_u64le(copies);
    h.update_u64le(identity.size());
    h.update(identity);
    for (const auto& ep : endpoints) {
        h.update_u64le(ep.size());
        h.update(bytes_of(ep));
    }
    return h.finalize();
}

// ---- distributed sumcheck ----------------------------------------------

DistSumcheckResult dist_sumcheck_run(std::span<Channel* const> workers, std::size_t low_vars,
                                     std::size_t high_vars, bool has_ab, bool has_c,
                                     Transcript& tr) {
    DistSumcheckResult res;
    Fp claim = Fp::zero();
    for (std::size_t i = 0; i < workers.size(); ++i) {
        Frame f_r = recv_expect(*workers[i], TAG_SC_SUM, i);
        ByteReader r(f_r.payload);
        claim += r.fp();
        reader_done(r, "sum");
    }
    res.proof.claimed_sum = claim;
    tr.absorb(claim);

    for (std::size_t round = 0; round < low_vars; ++round) {
        RoundPoly rp{};
        for (std::size_t i = 0; i < workers.size(); ++i) {
            Frame f_r = recv_expect(*workers[i], TAG_SC_POLY, i);
            ByteReader r(f_r.payload);
            rp.c0 += r.fp();
            rp.c1 += r.fp();
            rp.c2 += r.fp();
            reader_done(r, "round poly");
        }
        std::vector<Fp> coeffs{rp.c0, rp.c1, rp.c2};
        tr.absorb(std::span<const Fp>(coeffs));
        Fp chal = tr.challenge_fp();
        ByteWriter w;
        w.fp(chal);
        for (Channel* ch : workers) ch->send(Frame{TAG_SC_CHAL, w.bytes});
        res.proof.rounds.push_back(rp);
        res.point.push_back(chal);
    }

    QuadInstance fprime{high_vars, {}, {}, {}};
    for (std::size_t i = 0; i < workers.size(); ++i) {
        Frame f_r = recv_expect(*workers[i], TAG_SC_TABLES, i);
        ByteReader r(f_r.payload);
        auto a = r.fps(), b = r.fps(), c = r.fps();
        reader_done(r, "tables");
        fprime.a.insert(fprime.a.end(), a.begin(), a.end());
        fprime.b.insert(fprime.b.end(), b.begin(), b.end());
        fprime.c.insert(fprime.c.end(), c.begin(), c.end());
    }
    std::size_t want = std::size_t{1} << high_vars;
    if (has_ab && (fprime.a.size() != want || fprime.b.size() != want))
        throw ProtocolError("distributed sumcheck: bad residual product-table size");
    if (has_c && fprime.c.size() != want)
        throw ProtocolError("distributed sumcheck: bad residual linear-table size");
    if (!has_ab) fprime.a.clear(), fprime.b.clear();
    if (!has_c) fprime.c.clear();

    while (fprime.vars > 0) {
        RoundPoly rp = sumcheck_round_poly(fprime);
        std::vector<Fp> coeffs{rp.c0, rp.c1, rp.c2};
        tr.absorb(std::span<const Fp>(coeffs));
        Fp chal = tr.challenge_fp();
        sumcheck_fold(fprime, chal);
        res.proof.rounds.push_back(rp);
        res.point.push_back(chal);
    }
    res.a_eval = fprime.a.empty() ? Fp::zero() : fprime.a[0];
    res.b_eval = fprime.b.empty() ? Fp::zero() : fprime.b[0];
    res.c_eval = fprime.c.empty() ? Fp::zero() : fprime.c[0];
    return res;
}

std::vector<Fp> sumcheck_phase_serve(Channel& ch, QuadInstance inst, std::size_t low_vars) {
    inst.validate();
    if (low_vars > inst.vars) throw std::invalid_argument("sumcheck serve: too many relay rounds");
    {
        ByteWriter w;
        w.fp(inst.sum());
        ch.send(Frame{TAG_SC_SUM, std::move(w.bytes)});
    }
    std::vector<Fp> point;
    for (std::size_t round = 0; round < low_vars; ++round) {
        RoundPoly rp = sumcheck_round_poly(inst);
        ByteWriter w;
        w.fp(rp.c0);
        w.fp(rp.c1);
        w.fp(rp.c2);
        ch.send(Frame{TAG_SC_POLY, std::move(w.bytes)});
        Frame f_r = recv_expect(ch, TAG_SC_CHAL, 0);
        ByteReader r(f_r.payload);
        Fp chal = r.fp();
        reader_done(r, "challenge");
        sumcheck_fold(inst, chal);
        point.push_back(chal);
    }
    ByteWriter w;
    w.fps(inst.a);
    w.fps(inst.b);
    w.fps(inst.c);
    ch.send(Frame{TAG_SC_TABLES, std::move(w.bytes)});
    return point;
}

// ---- column-aggregated PC ----------------------------------------------

void DistPcParams::validate() const {
    base.validate();
    if (!is_power_of_two(copies)) throw std::invalid_argument("pc: copy count must be a power of two");
}

Digest column_root(std::span<const Fp> bundle) {
    std::vector<std::vector<std::uint8_t>> leaves;
    leaves.reserve(bundle.size());
    for (Fp v : bundle) leaves.push_back(fp_leaf(v));
    return mt_commit(leaves).digest;
}

ColumnTree column_commit(const std::vector<std::vector<Fp>>& rows) {
    std::size_t width = rows.at(0).size();
    std::vector<std::vector<std::uint8_t>> top_leaves(width);
    std::vector<Digest> roots(width);
    std::vector<Fp> bundle(rows.size());
    for (std::size_t k = 0; k < width; ++k) {
        for (std::size_t i = 0; i < rows.size(); ++i) bundle[i] = rows[i][k];
        roots[k] = column_root(bundle);
        top_leaves[k].assign(roots[k].begin(), roots[k].end());
    }
    return ColumnTree{std::move(roots), MerkleTree(top_leaves)};
}

std::pair<DistPcCommitment, DistPcProverState> dist_pc_commit(const DistPcParams& params,
                                                              std::vector<std::vector<Fp>> tables) {
    params.validate();
    if (tables.size() != params.copies)
        throw std::invalid_argument("pc: table count must match the copy count");
    auto h_dom = EvaluationDomain::subgroup_h(params.base.h_order());
    auto l_dom = EvaluationDomain::coset_l(params.base.l_order());
    std::vector<std::vector<Fp>> coeffs(params.copies), rows(params.copies);
    for (std::size_t i = 0; i < params.copies; ++i) {
        if (tables[i].size() != params.base.h_order())
            throw std::invalid_argument("pc: bad per-copy table size");
        coeffs[i] = ifft_interpolate(tables[i], h_dom);
        rows[i] = fft_evaluate(coeffs[i], l_dom);
    }
    ColumnTree tree = column_commit(rows);
    DistPcCommitment com{tree.top.root()};
    return {com, DistPcProverState{params, std::move(tables), std::move(coeffs), std::move(rows),
                                   std::move(tree)}};
}

ColumnOpening dist_open_column(const DistPcProverState& state, std::size_t index) {
    ColumnOpening o;
    for (const auto& row : state.rows) o.values.push_back(row.at(index));
    o.path = state.tree.top.open(index);
    return o;
}

bool dist_verify_column(const DistPcCommitment& com, std::size_t index, std::size_t copies,
                        const ColumnOpening& opening) {
    if (opening.values.size() != copies || opening.path.leaf_index != index) return false;
    Digest root = column_root(opening.values);
    return mt_verify(opening.path, {root.data(), root.size()}, com.root);
}

std::size_t DistPcOpeningProof::opened_path_count() const {
    std::size_t n = 0;
    for (const auto& q : queries) n += 4 + 2 * q.fold.size();
    return n;
}

std::size_t DistPcOpeningProof::opened_hash_count() const {
    std::size_t n = 0;
    auto add = [&](const ColumnOpening& o) { n += o.path.siblings.size(); };
    for (const auto& q : queries) {
        add(q.f_lo);
        add(q.f_hi);
        add(q.h_lo);
        add(q.h_hi);
        for (const auto& pair : q.fold) {
            add(pair[0]);
            add(pair[1]);
        }
    }
    return n;
}

namespace {

// Tail of the opening once the per-copy decompositions and h rows exist:
// commits h column-wise, runs the shared FRI schedule over every copy's
// combined polynomial, then answers the spot checks with column bundles.
DistPcOpeningProof open_finish(const DistPcParams& p, const ColumnTree& f_tree,
                               const std::vector<std::vector<Fp>>& f_rows, std::vector<Fp> ys_u,
                               std::vector<Fp> ys_v, const std::vector<UniDecomp>& decomps,
                               const std::vector<std::vector<Fp>>& h_rows, Transcript& tr) {
    const std::size_t copies = p.copies;
    const std::size_t big = p.base.l_order();
    const std::size_t t = p.base.fold_count();
    auto l_dom = EvaluationDomain::coset_l(big);

    DistPcOpeningProof proof;
    proof.ys_u = std::move(ys_u);
    proof.ys_v = std::move(ys_v);

    ColumnTree h_tree = column_commit(h_rows);
    proof.h_root = h_tree.top.root();
    tr.absorb(proof.h_root.digest);
    Fp delta = tr.challenge_fp();

    // levels[i][copy] = copy's FRI layer i; level 0 is G = x*(h + delta*g)
    std::vector<std::vector<std::vector<Fp>>> levels(1);
    for (std::size_t c = 0; c < copies; ++c)
        levels[0].push_back(fft_evaluate(combine_hg(decomps[c], delta), l_dom));

    std::vector<ColumnTree> fold_trees;
    Fp offset = l_dom.offset(), gen = l_dom.generator();
    for (std::size_t i = 0; i < t; ++i) {
        if (i > 0) {
            fold_trees.push_back(column_commit(levels[i]));
            proof.fold_roots.push_back(fold_trees.back().top.root());
            tr.absorb(fold_trees.back().top.root().digest);
        }
        Fp chal = tr.challenge_fp();
        std::vector<std::vector<Fp>> next;
        for (std::size_t c = 0; c < copies; ++c)
            next.push_back(fri_fold(levels[i][c], chal, offset, gen));
        levels.push_back(std::move(next));
        offset *= offset;
        gen *= gen;
    }
    proof.final_layers = levels.back();
    for (const auto& layer : proof.final_layers) tr.absorb(std::span<const Fp>(layer));

    auto bundle_at = [&](const std::vector<std::vector<Fp>>& rows, const ColumnTree& tree,
                         std::size_t k) {
        ColumnOpening o;
        for (const auto& row : rows) o.values.push_back(row[k]);
        o.path = tree.top.open(k);
        return o;
    };

    for (std::size_t qi = 0; qi < p.base.queries; ++qi) {
        std::size_t k = tr.challenge_index(big);
        std::size_t pos = k % (big / 2);
        DistPcQuery q;
        q.f_lo = bundle_at(f_rows, f_tree, pos);
        q.f_hi = bundle_at(f_rows, f_tree, pos + big / 2);
        q.h_lo = bundle_at(h_rows, h_tree, pos);
        q.h_hi = bundle_at(h_rows, h_tree, pos + big / 2);
        std::size_t prev = pos;
        for (std::size_t i = 1; i < t; ++i) {
            std::size_t sz = big >> i;
            std::size_t pi = prev % (sz / 2);
            q.fold.push_back({bundle_at(levels[i], fold_trees[i - 1], pi),
                              bundle_at(levels[i], fold_trees[i - 1], pi + sz / 2)});
            prev = pi;
        }
        proof.queries.push_back(std::move(q));
    }
    return proof;
}

struct OpenedClaims {
    std::vector<Fp> ys_u, ys_v; // per copy
    std::vector<Fp> y_comb;     // per copy, batching applied
    std::vector<Fp> eq;         // shared weight table on H
    Fp gamma;                   // batching scalar (two-point openings only)
};

// Shared head of the opening transcript: absorb root, per-copy claims, draw
// the batching scalar when two points are opened.
OpenedClaims absorb_claims(const MerkleRoot& root, std::size_t copies, std::size_t low_vars,
                           std::span<const std::span<const Fp>> points,
                           std::span<const std::vector<Fp>> ys, Transcript& tr) {
    tr.absorb(root.digest);
    OpenedClaims oc;
    oc.ys_u = ys[0];
    for (Fp y : oc.ys_u) tr.absorb(y);
    if (points.size() == 2) {
        oc.ys_v = ys[1];
        for (Fp y : oc.ys_v) tr.absorb(y);
    }
    oc.eq = beta_table(points[0].first(low_vars));
    oc.y_comb = oc.ys_u;
    if (points.size() == 2) {
        oc.gamma = tr.challenge_fp();
        auto eq2 = beta_table_scaled(points[1].first(low_vars), oc.gamma);
        for (std::size_t i = 0; i < oc.eq.size(); ++i) oc.eq[i] += eq2[i];
        for (std::size_t i = 0; i < copies; ++i) oc.y_comb[i] += oc.gamma * oc.ys_v[i];
    }
    return oc;
}

DistPcOpeningProof open_impl(const DistPcProverState& state,
                             std::span<const std::span<const Fp>> points, Transcript& tr) {
    const DistPcParams& p = state.params;
    std::size_t n_copy = log2_exact(p.copies);
    std::vector<std::vector<Fp>> ys(points.size());
    for (std::size_t pt = 0; pt < points.size(); ++pt) {
        if (points[pt].size() != p.base.vars + n_copy)
            throw std::invalid_argument("pc: bad opening point dimension");
        for (std::size_t c = 0; c < p.copies; ++c)
            ys[pt].push_back(mle_evaluate(state.tables[c], points[pt].first(p.base.vars)));
    }
    OpenedClaims oc = absorb_claims(state.tree.top.root(), p.copies, p.base.vars, points, ys, tr);

    auto l_dom = EvaluationDomain::coset_l(p.base.l_order());
    std::vector<UniDecomp> decomps;
    std::vector<std::vector<Fp>> h_rows;
    for (std::size_t c = 0; c < p.copies; ++c) {
        decomps.push_back(univariate_decompose(state.f_coeffs[c], oc.eq));
        if (decomps.back().y != oc.y_comb[c])
            throw std::logic_error("pc: per-copy decomposition sum mismatch");
        h_rows.push_back(fft_evaluate(decomps.back().h_coeffs, l_dom));
    }
    return open_finish(p, state.tree, state.rows, std::move(oc.ys_u), std::move(oc.ys_v), decomps,
                       h_rows, tr);
}

DistPcVerifyResult verify_impl(const DistPcCommitment& com, const DistPcParams& p,
                               std::span<const std::span<const Fp>> points,
                               const DistPcOpeningProof& proof, Transcript& tr) {
    DistPcVerifyResult out;
    const std::size_t copies = p.copies;
    const std::size_t m = p.base.h_order(), big = p.base.l_order();
    const std::size_t t = p.base.fold_count();
    const std::size_t n_copy = log2_exact(copies);

    for (auto pt : points)
        if (pt.size() != p.base.vars + n_copy) return out;
    if (proof.ys_u.size() != copies) return out;
    if (points.size() == 2 ? proof.ys_v.size() != copies : !proof.ys_v.empty()) return out;
    if (proof.fold_roots.size() != (t > 0 ? t - 1 : 0)) return out;
    if (proof.final_layers.size() != copies) return out;
    for (const auto& layer : proof.final_layers)
        if (layer.size() != (big >> t)) return out;
    if (proof.queries.size() != p.base.queries) return out;

    std::vector<std::vector<Fp>> ys{proof.ys_u};
    if (points.size() == 2) ys.push_back(proof.ys_v);
    OpenedClaims oc = absorb_claims(com.root, copies, p.base.vars, points, ys, tr);

    tr.absorb(proof.h_root.digest);
    Fp delta = tr.challenge_fp();
    std::vector<Fp> chals;
    for (std::size_t i = 0; i < t; ++i) {
        if (i > 0) tr.absorb(proof.fold_roots[i - 1].digest);
        chals.push_back(tr.challenge_fp());
    }
    for (const auto& layer : proof.final_layers) tr.absorb(std::span<const Fp>(layer));

    Fp final_offset = Fp(EvaluationDomain::COSET_OFFSET).pow(std::uint64_t{1} << t);
    std::size_t bound = std::max<std::size_t>(1, m >> t);
    for (const auto& layer : proof.final_layers)
        if (!final_layer_low_degree(layer, final_offset, bound)) return out;

    auto l_dom = EvaluationDomain::coset_l(big);
    Fp inv_m = Fp(m).inverse();
    std::vector<Fp> y_over_m(copies);
    for (std::size_t c = 0; c < copies; ++c) y_over_m[c] = oc.y_comb[c] * inv_m;

    auto check_bundle = [&](const ColumnOpening& o, std::size_t index, const MerkleRoot& root) {
        if (o.values.size() != copies || o.path.leaf_index != index) return false;
        Digest cr = column_root(o.values);
        return mt_verify(o.path, {cr.data(), cr.size()}, root);
    };

    std::vector<Fp> cur(copies);
    for (const DistPcQuery& q : proof.queries) {
        std::size_t k = tr.challenge_index(big);
        std::size_t pos = k % (big / 2);
        if (!check_bundle(q.f_lo, pos, com.root) || !check_bundle(q.f_hi, pos + big / 2, com.root) ||
            !check_bundle(q.h_lo, pos, proof.h_root) ||
            !check_bundle(q.h_hi, pos + big / 2, proof.h_root))
            return out;
        if (q.fold.size() != (t > 0 ? t - 1 : 0)) return out;

        Fp x = l_dom.element(pos);
        Fp xn = l_dom.element(pos + big / 2);
        Fp w_lo = weight_eval(oc.eq, x), w_hi = weight_eval(oc.eq, xn);
        Fp zh_lo = x.pow(m) - Fp::one(), zh_hi = xn.pow(m) - Fp::one();
        for (std::size_t c = 0; c < copies; ++c) {
            Fp g_lo = derive_g0(x, q.f_lo.values[c], q.h_lo.values[c], w_lo, zh_lo, delta,
                                y_over_m[c]);
            Fp g_hi = derive_g0(xn, q.f_hi.values[c], q.h_hi.values[c], w_hi, zh_hi, delta,
                                y_over_m[c]);
            if (t == 0) {
                if (proof.final_layers[c][pos] != g_lo ||
                    proof.final_layers[c][pos + big / 2] != g_hi)
                    return out;
            } else {
                cur[c] = fri_fold_pair(g_lo, g_hi, chals[0], x);
            }
        }
        if (t == 0) continue;

        std::size_t prev = pos;
        Fp offset_i = Fp(EvaluationDomain::COSET_OFFSET);
        for (std::size_t i = 1; i < t; ++i) {
            offset_i *= offset_i;
            std::size_t sz = big >> i;
            std::size_t pi = prev % (sz / 2);
            const auto& pair = q.fold[i - 1];
            if (!check_bundle(pair[0], pi, proof.fold_roots[i - 1]) ||
                !check_bundle(pair[1], pi + sz / 2, proof.fold_roots[i - 1]))
                return out;
            Fp gen_i = EvaluationDomain::root_of_unity(log2_exact(sz));
            Fp xi = offset_i * gen_i.pow(pi);
            bool low_half = prev == pi;
            for (std::size_t c = 0; c < copies; ++c) {
                if ((low_half ? pair[0].values[c] : pair[1].values[c]) != cur[c]) return out;
                cur[c] = fri_fold_pair(pair[0].values[c], pair[1].values[c], chals[i], xi);
            }
            prev = pi;
        }
        for (std::size_t c = 0; c < copies; ++c)
            if (proof.final_layers[c][prev] != cur[c]) return out;
    }

    // Eq. 2 aggregation of the per-copy claims
    auto bh = beta_table(points[0].subspan(p.base.vars));
    out.y_u = Fp::zero();
    for (std::size_t i = 0; i < copies; ++i) out.y_u += bh[i] * proof.ys_u[i];
    if (points.size() == 2) {
        auto bh2 = beta_table(points[1].subspan(p.base.vars));
        out.y_v = Fp::zero();
        for (std::size_t i = 0; i < copies; ++i) out.y_v += bh2[i] * proof.ys_v[i];
    }
    out.ok = true;
    return out;
}

} // namespace

DistPcOpeningProof dist_pc_open(const DistPcProverState& state, std::span<const Fp> r,
                                Transcript& tr) {
    std::span<const Fp> pts[1] = {r};
    return open_impl(state, pts, tr);
}

DistPcOpeningProof dist_pc_batch_open(const DistPcProverState& state, std::span<const Fp> u,
                                      std::span<const Fp> v, Transcript& tr) {
    std::span<const Fp> pts[2] = {u, v};
    return open_impl(state, pts, tr);
}

DistPcVerifyResult dist_pc_verify(const DistPcCommitment& com, const DistPcParams& params,
                                  std::span<const Fp> r, const DistPcOpeningProof& proof,
                                  Transcript& tr) {
    std::span<const Fp> pts[1] = {r};
    return verify_impl(com, params, pts, proof, tr);
}

DistPcVerifyResult dist_pc_batch_verify(const DistPcCommitment& com, const DistPcParams& params,
                                        std::span<const Fp> u, std::span<const Fp> v,
                                        const DistPcOpeningProof& proof, Transcript& tr) {
    std::span<const Fp> pts[2] = {u, v};
    return verify_impl(com, params, pts, proof, tr);
}

NaiveDistPc naive_dist_pc_commit(const DistPcParams& params,
                                 const std::vector<std::vector<Fp>>& tables) {
    params.validate();
    if (tables.size() != params.copies)
        throw std::invalid_argument("pc: table count must match the copy count");
    NaiveDistPc pc;
    for (const auto& t : tables) {
        auto [com, st] = pc_commit(MultilinearTable(params.base.vars, t), params.base);
        pc.coms.push_back(com);
        pc.states.push_back(std::move(st));
    }
    return pc;
}

std::size_t NaiveColumnOpening::hash_count() const {
    std::size_t n = 0;
    for (const auto& p : paths) n += p.siblings.size();
    return n;
}

NaiveColumnOpening naive_open_column(const NaiveDistPc& pc, std::size_t index) {
    NaiveColumnOpening o;
    for (const auto& st : pc.states) {
        o.values.push_back(st.f_l.at(index));
        o.paths.push_back(st.tree.open(index));
    }
    return o;
}

bool naive_verify_column(const NaiveDistPc& pc, std::size_t index,
                         const NaiveColumnOpening& opening) {
    if (opening.values.size() != pc.coms.size() || opening.paths.size() != pc.coms.size())
        return false;
    for (std::size_t i = 0; i < pc.coms.size(); ++i) {
        if (opening.paths[i].leaf_index != index) return false;
        if (!mt_verify(opening.paths[i], fp_leaf(opening.values[i]), pc.coms[i].root)) return false;
    }
    return true;
}

// ---- proof serialization -----------------------------------------------

namespace {

void write_column(ByteWriter& w, const ColumnOpening& o) {
    w.fps(o.values);
    write_path(w, o.path);
}

ColumnOpening read_column(ByteReader& r) {
    ColumnOpening o;
    o.values = r.fps();
    o.path = read_path(r);
    return o;
}

} // namespace

void DistPcOpeningProof::serialize(ByteWriter& w) const {
    w.fps(ys_u);
    w.fps(ys_v);
    w.digest(h_root.digest);
    w.u64(fold_roots.size());
    for (const auto& rt : fold_roots) w.digest(rt.digest);
    w.u64(final_layers.size());
    for (const auto& layer : final_layers) w.fps(layer);
    w.u64(queries.size());
    for (const DistPcQuery& q : queries) {
        write_column(w, q.f_lo);
        write_column(w, q.f_hi);
        write_column(w, q.h_lo);
        write_column(w, q.h_hi);
        w.u64(q.fold.size());
        for (const auto& pair : q.fold) {
            write_column(w, pair[0]);
            write_column(w, pair[1]);
        }
    }
}

DistPcOpeningProof DistPcOpeningProof::deserialize(ByteReader& r) {
    DistPcOpeningProof p;
    p.ys_u = r.fps();
    p.ys_v = r.fps();
    p.h_root.digest = r.digest();
    std::uint64_t nroots = r.u64();
    if (nroots > 64) throw std::invalid_argument("pc proof: too many fold roots");
    for (std::uint64_t i = 0; i < nroots; ++i) p.fold_roots.push_back({r.digest()});
    std::uint64_t nfinal = r.u64();
    if (nfinal > 4096) throw std::invalid_argument("pc proof: too many final layers");
    for (std::uint64_t i = 0; i < nfinal; ++i) p.final_layers.push_back(r.fps());
    std::uint64_t nq = r.u64();
    if (nq > 4096) throw std::invalid_argument("pc proof: too many queries");
    for (std::uint64_t i = 0; i < nq; ++i) {
        DistPcQuery q;
        q.f_lo = read_column(r);
        q.f_hi = read_column(r);
        q.h_lo = read_column(r);
        q.h_hi = read_column(r);
        std::uint64_t nf = r.u64();
        if (nf > 64) throw std::invalid_argument("pc proof: too many fold layers");
        for (std::uint64_t j = 0; j < nf; ++j) {
            std::array<ColumnOpening, 2> pair{read_column(r), read_column(r)};
            q.fold.push_back(std::move(pair));
        }
        p.queries.push_back(std::move(q));
    }
    return p;
}

std::vector<std::uint8_t> DeVirgoProof::serialize() const {
    ByteWriter w;
    w.digest(witness_com.root.digest);
    gkr.serialize(w);
    opening.serialize(w);
    return std::move(w.bytes);
}

DeVirgoProof DeVirgoProof::deserialize(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    DeVirgoProof p;
    p.witness_com.root.digest = r.digest();
    p.gkr = GkrProof::deserialize(r);
    p.opening = DistPcOpeningProof::deserialize(r);
    if (!r.done()) throw std::invalid_argument("proof: trailing bytes");
    return p;
}

// ---- the full argument -------------------------------------------------

namespace {

std::size_t witness_size(const LayeredCircuit& sub) {
    return sub.input_size - sub.public_inputs;
}

// Input-layer point -> witness-opening point: keep the per-copy witness
// coordinates and the copy coordinates, dropping the public/witness split
// coordinate when the circuit has public inputs.
std::vector<Fp> witness_point(std::span<const Fp> p, const LayeredCircuit& sub) {
    std::size_t lm = log2_exact(sub.input_size);
    std::size_t lw = log2_exact(witness_size(sub));
    std::vector<Fp> out(p.begin(), p.begin() + lw);
    out.insert(out.end(), p.begin() + lm, p.end());
    return out;
}

std::vector<std::vector<Fp>> witness_tables(const LayeredCircuit& sub, std::size_t copies,
                                            std::span<const Fp> input) {
    std::size_t m = sub.input_size, pub = sub.public_inputs;
    std::vector<std::vector<Fp>> tables(copies);
    for (std::size_t c = 0; c < copies; ++c) {
        auto slice = input.subspan(c * m + pub, m - pub);
        tables[c].assign(slice.begin(), slice.end());
    }
    return tables;
}

} // namespace

DeVirgoProof virgo_prove(const DataParallelCircuit& c, std::span<const Fp> input,
                         const DeVirgoParams& params, Transcript& tr) {
    c.sub.validate();
    if (input.size() != c.input_size()) throw std::invalid_argument("prove: bad input size");
    DistPcParams dp{c.copies,
                    PcParams{log2_exact(witness_size(c.sub)), params.rho, params.queries}};
    auto [com, state] = dist_pc_commit(dp, witness_tables(c.sub, c.copies, input));

    DeVirgoProof proof;
    proof.witness_com = com;
    tr.absorb(com.root.digest);

    Transcript replay = tr; // to recover the final evaluation points
    proof.gkr = gkr_prove(c, input, tr);
    auto outcome = gkr_verify_layers(c, proof.gkr.output, proof.gkr, replay);
    if (!outcome.ok) throw std::logic_error("prove: self-verification of the layer proofs failed");

    auto pu = witness_point(outcome.u, c.sub);
    auto pv = witness_point(outcome.v, c.sub);
    proof.opening = dist_pc_batch_open(state, pu, pv, tr);
    return proof;
}

bool devirgo_verify(const DataParallelCircuit& c, std::span<const Fp> claimed_output,
                    std::span<const Fp> public_inputs, const DeVirgoProof& proof,
                    const DeVirgoParams& params, Transcript& tr) {
    try {
        c.sub.validate();
        DistPcParams dp{c.copies,
                        PcParams{log2_exact(witness_size(c.sub)), params.rho, params.queries}};
        dp.validate();
        std::size_t pub = c.sub.public_inputs;
        if (public_inputs.size() != pub * c.copies) return false;

        tr.absorb(proof.witness_com.root.digest);
        auto outcome = gkr_verify_layers(c, claimed_output, proof.gkr, tr);
        if (!outcome.ok) return false;

        auto pu = witness_point(outcome.u, c.sub);
        auto pv = witness_point(outcome.v, c.sub);
        auto res = dist_pc_batch_verify(proof.witness_com, dp, pu, pv, proof.opening, tr);
        if (!res.ok) return false;

        // public-input binding of the two input-layer claims
        Fp expect_u = res.y_u, expect_v = res.y_v;
        if (pub > 0) {
            std::size_t lm = log2_exact(c.sub.input_size);
            Fp su = outcome.u[lm - 1], sv = outcome.v[lm - 1];
            expect_u = (Fp::one() - su) * mle_evaluate(public_inputs, pu) + su * res.y_u;
            expect_v = (Fp::one() - sv) * mle_evaluate(public_inputs, pv) + sv * res.y_v;
        }
        return outcome.wu == expect_u && outcome.wv == expect_v;
    } catch (const std::exception&) {
        return false;
    }
}

// ---- coordinator / worker protocol -------------------------------------

DeVirgoProof devirgo_prove(std::span<Channel* const> workers, const DataParallelCircuit& c,
                           std::span<const Fp> input, const DeVirgoParams& params, Transcript& tr,
                           std::vector<WorkerStats>* stats) {
    c.sub.validate();
    const std::size_t nw = workers.size();
    const std::size_t copies = c.copies;
    if (!is_power_of_two(nw) || !is_power_of_two(copies) || nw > copies)
        throw std::invalid_argument("prove: bad cluster shape");
    if (input.size() != c.input_size()) throw std::invalid_argument("prove: bad input size");
    const std::size_t per_worker = copies / nw;
    const std::size_t m = c.sub.input_size;
    DistPcParams dp{copies, PcParams{log2_exact(witness_size(c.sub)), params.rho, params.queries}};
    dp.validate();

    std::string text = circuit_to_text(c.sub);
    for (std::size_t j = 0; j < nw; ++j) {
        ByteWriter w;
        w.u64(copies);
        w.u64(j * per_worker);
        w.u64(per_worker);
        w.u64(params.rho);
        w.u64(params.queries);
        w.blob(bytes_of(text));
        w.fps(input.subspan(j * per_worker * m, per_worker * m));
        workers[j]->send(Frame{TAG_SETUP, std::move(w.bytes)});
    }

    std::size_t out_sub = c.sub.output_size();
    std::vector<Fp> output(copies * out_sub);
    std::vector<std::vector<Fp>> rows(copies);
    for (std::size_t j = 0; j < nw; ++j) {
        Frame f_r = recv_expect(*workers[j], TAG_OUTPUT, j);
        ByteReader r(f_r.payload);
        auto out_j = r.fps();
        if (out_j.size() != per_worker * out_sub)
            throw ProtocolError("worker " + std::to_string(j) + ": bad output slice");
        std::copy(out_j.begin(), out_j.end(), output.begin() + j * per_worker * out_sub);
        std::uint64_t cnt = r.u64();
        if (cnt != per_worker) throw ProtocolError("worker " + std::to_string(j) + ": bad row count");
        for (std::size_t jc = 0; jc < per_worker; ++jc) {
            rows[j * per_worker + jc] = r.fps();
            if (rows[j * per_worker + jc].size() != dp.base.l_order())
                throw ProtocolError("worker " + std::to_string(j) + ": bad row length");
        }
        reader_done(r, "output");
    }

    ColumnTree tree = column_commit(rows);
    DeVirgoProof proof;
    proof.witness_com = DistPcCommitment{tree.top.root()};
    tr.absorb(proof.witness_com.root.digest);

    proof.gkr.output = output;
    tr.absorb(std::span<const Fp>(output));
    auto g = tr.challenge_fps(log2_exact(output.size()));
    {
        ByteWriter w;
        w.u64(0);
        w.u8(0);
        w.fps(g);
        for (Channel* ch : workers) ch->send(Frame{TAG_LAYER, w.bytes});
    }

    const std::size_t n_copy = log2_exact(copies);
    std::vector<Fp> u, v;
    for (std::size_t i = 0; i < c.depth(); ++i) {
        std::size_t low = log2_exact(c.sub.fanin_size(i));
        auto resx = dist_sumcheck_run(workers, low, n_copy, true, true, tr);
        Fp wu = resx.b_eval;
        {
            ByteWriter w;
            w.fps(std::span<const Fp>(resx.point).subspan(low));
            w.fp(wu);
            for (Channel* ch : workers) ch->send(Frame{TAG_PHASE_Y, w.bytes});
        }
        auto resy = dist_sumcheck_run(workers, low, n_copy, true, true, tr);
        Fp wv = resy.b_eval;
        tr.absorb(wu);
        tr.absorb(wv);
        proof.gkr.layers.push_back({std::move(resx.proof), std::move(resy.proof), wu, wv});

        if (i + 1 < c.depth()) {
            auto alpha = tr.challenge_fps(2);
            ByteWriter w;
            w.u64(i + 1);
            w.u8(1);
            w.fps(resx.point);
            w.fps(resy.point);
            w.fp(alpha[0]);
            w.fp(alpha[1]);
            for (Channel* ch : workers) ch->send(Frame{TAG_LAYER, w.bytes});
        } else {
            u = std::move(resx.point);
            v = std::move(resy.point);
        }
    }

    auto pu = witness_point(u, c.sub);
    auto pv = witness_point(v, c.sub);
    std::span<const Fp> u_red(pu.data(), dp.base.vars);
    std::span<const Fp> v_red(pv.data(), dp.base.vars);

    {
        ByteWriter w;
        w.fps(u_red);
        w.fps(v_red);
        for (Channel* ch : workers) ch->send(Frame{TAG_PC_EVAL, w.bytes});
    }
    std::vector<Fp> ys_u(copies), ys_v(copies);
    for (std::size_t j = 0; j < nw; ++j) {
        Frame f_r = recv_expect(*workers[j], TAG_PC_YS, j);
        ByteReader r(f_r.payload);
        auto yu = r.fps(), yv = r.fps();
        reader_done(r, "evaluations");
        if (yu.size() != per_worker || yv.size() != per_worker)
            throw ProtocolError("worker " + std::to_string(j) + ": bad evaluation count");
        std::copy(yu.begin(), yu.end(), ys_u.begin() + j * per_worker);
        std::copy(yv.begin(), yv.end(), ys_v.begin() + j * per_worker);
    }

    std::span<const Fp> pts[2] = {pu, pv};
    std::vector<std::vector<Fp>> ys{ys_u, ys_v};
    OpenedClaims oc = absorb_claims(proof.witness_com.root, copies, dp.base.vars, pts, ys, tr);

    {
        ByteWriter w;
        w.fp(oc.gamma);
        for (Channel* ch : workers) ch->send(Frame{TAG_PC_GAMMA, w.bytes});
    }
    std::vector<UniDecomp> decomps(copies);
    std::vector<std::vector<Fp>> h_rows(copies);
    for (std::size_t j = 0; j < nw; ++j) {
        Frame f_r = recv_expect(*workers[j], TAG_PC_H, j);
        ByteReader r(f_r.payload);
        std::uint64_t cnt = r.u64();
        if (cnt != per_worker)
            throw ProtocolError("worker " + std::to_string(j) + ": bad decomposition count");
        for (std::size_t jc = 0; jc < per_worker; ++jc) {
            std::size_t gc = j * per_worker + jc;
            h_rows[gc] = r.fps();
            decomps[gc].h_coeffs = r.fps();
            decomps[gc].g_coeffs = r.fps();
            decomps[gc].y = oc.y_comb[gc];
            if (h_rows[gc].size() != dp.base.l_order() ||
                decomps[gc].h_coeffs.size() != dp.base.h_order() ||
                decomps[gc].g_coeffs.size() != dp.base.h_order() - 1)
                throw ProtocolError("worker " + std::to_string(j) + ": bad decomposition shape");
        }
        reader_done(r, "decomposition");
    }

    proof.opening = open_finish(dp, tree, rows, std::move(oc.ys_u), std::move(oc.ys_v), decomps,
                                h_rows, tr);

    for (Channel* ch : workers) ch->send(Frame{TAG_FINISH, {}});
    if (stats) stats->clear();
    for (std::size_t j = 0; j < nw; ++j) {
        Frame f_r = recv_expect(*workers[j], TAG_STATS, j);
        ByteReader r(f_r.payload);
        WorkerStats ws;
        ws.gates_evaluated = r.u64();
        reader_done(r, "stats");
        if (stats) stats->push_back(ws);
    }
    return proof;
}

WorkerStats devirgo_worker(Channel& ch) {
    WorkerStats stats;

    Frame f_sr = recv_expect(ch, TAG_SETUP, 0);
    ByteReader sr(f_sr.payload);
    const std::size_t copies_total = sr.u64();
    const std::size_t first = sr.u64();
    const std::size_t mine = sr.u64();
    const std::size_t rho = sr.u64();
    const std::size_t queries = sr.u64();
    auto text = sr.blob();
    auto input = sr.fps();
    reader_done(sr, "setup");

    LayeredCircuit sub = circuit_from_text(std::string(text.begin(), text.end()));
    sub.validate();
    if (!is_power_of_two(copies_total) || !is_power_of_two(mine) || mine == 0 ||
        first + mine > copies_total)
        throw ProtocolError("setup: bad copy assignment");
    DataParallelCircuit local{sub, mine};
    if (input.size() != local.input_size()) throw ProtocolError("setup: bad input slice");

    LayerValues vals = circuit_evaluate(local, input);
    for (const Layer& l : sub.layers) stats.gates_evaluated += mine * l.gates.size();

    const std::size_t m = sub.input_size;
    const std::size_t pub = sub.public_inputs;
    const std::size_t wsize = m - pub;
    PcParams base{log2_exact(wsize), rho, queries};
    base.validate();
    auto h_dom = EvaluationDomain::subgroup_h(wsize);
    auto l_dom = EvaluationDomain::coset_l(base.l_order());

    std::vector<std::vector<Fp>> wit(mine), f_coeffs(mine), f_rows(mine);
    for (std::size_t j = 0; j < mine; ++j) {
        auto slice = std::span<const Fp>(input).subspan(j * m + pub, wsize);
        wit[j].assign(slice.begin(), slice.end());
        f_coeffs[j] = ifft_interpolate(wit[j], h_dom);
        f_rows[j] = fft_evaluate(f_coeffs[j], l_dom);
    }
    {
        ByteWriter w;
        w.fps(vals.output());
        w.u64(mine);
        for (const auto& row : f_rows) w.fps(row);
        ch.send(Frame{TAG_OUTPUT, std::move(w.bytes)});
    }

    const std::size_t n_copy = log2_exact(copies_total);

    for (;;) {
        Frame f = ch.receive();
        ByteReader r(f.payload);
        switch (f.tag) {
            case TAG_LAYER: {
                std::size_t layer = r.u64();
                std::uint8_t kind = r.u8();
                if (layer >= sub.depth()) throw ProtocolError("layer: index out of range");
                const std::size_t sz = sub.layers[layer].gates.size();
                const std::size_t sb = sub.fanin_size(layer);
                const std::size_t lz = log2_exact(sz);

                // per-owned-copy slices of the global z-weight table
                std::vector<Fp> z(sz * mine);
                if (kind == 0) {
                    auto g = r.fps();
                    reader_done(r, "layer");
                    if (g.size() != lz + n_copy) throw ProtocolError("layer: bad point size");
                    auto g_low = std::span<const Fp>(g).first(lz);
                    auto bg = beta_table(std::span<const Fp>(g).subspan(lz));
                    for (std::size_t j = 0; j < mine; ++j) {
                        auto t = beta_table_scaled(g_low, bg[first + j]);
                        std::copy(t.begin(), t.end(), z.begin() + j * sz);
                    }
                } else {
                    auto u = r.fps();
                    auto v = r.fps();
                    Fp a0 = r.fp(), a1 = r.fp();
                    reader_done(r, "layer");
                    if (u.size() != lz + n_copy || v.size() != lz + n_copy)
                        throw ProtocolError("layer: bad point size");
                    auto bu = beta_table(std::span<const Fp>(u).subspan(lz));
                    auto bv = beta_table(std::span<const Fp>(v).subspan(lz));
                    for (std::size_t j = 0; j < mine; ++j) {
                        auto tu = beta_table_scaled(std::span<const Fp>(u).first(lz),
                                                    a0 * bu[first + j]);
                        auto tv = beta_table_scaled(std::span<const Fp>(v).first(lz),
                                                    a1 * bv[first + j]);
                        for (std::size_t i = 0; i < sz; ++i) z[j * sz + i] = tu[i] + tv[i];
                    }
                }

                const auto& w_vals = vals.layers[layer + 1];
                const std::size_t low = log2_exact(sb);

                QuadInstance px{log2_exact(sb * mine), std::vector<Fp>(sb * mine), w_vals,
                                std::vector<Fp>(sb * mine)};
                for (std::size_t j = 0; j < mine; ++j)
                    gkr_phase_x_tables(sub, layer, std::span<const Fp>(z).subspan(j * sz, sz),
                                       std::span<const Fp>(w_vals).subspan(j * sb, sb),
                                       std::span<Fp>(px.a).subspan(j * sb, sb),
                                       std::span<Fp>(px.c).subspan(j * sb, sb));
                auto x_low = sumcheck_phase_serve(ch, std::move(px), low);

                Frame f_ry = recv_expect(ch, TAG_PHASE_Y, 0);
                ByteReader ry(f_ry.payload);
                auto x_high = ry.fps();
                Fp wu = ry.fp();
                reader_done(ry, "phase");
                if (x_high.size() != n_copy) throw ProtocolError("phase: bad point size");
                auto bx = beta_table(std::span<const Fp>(x_high));

                QuadInstance py{log2_exact(sb * mine), std::vector<Fp>(sb * mine), w_vals,
                                std::vector<Fp>(sb * mine)};
                for (std::size_t j = 0; j < mine; ++j) {
                    auto beta_u = beta_table_scaled(x_low, bx[first + j]);
                    gkr_phase_y_tables(sub, layer, std::span<const Fp>(z).subspan(j * sz, sz),
                                       beta_u, wu, std::span<Fp>(py.a).subspan(j * sb, sb),
                                       std::span<Fp>(py.c).subspan(j * sb, sb));
                }
                sumcheck_phase_serve(ch, std::move(py), low);
                break;
            }
            case TAG_PC_EVAL: {
                auto u_red = r.fps();
                auto v_red = r.fps();
                reader_done(r, "pc point");
                if (u_red.size() != base.vars || v_red.size() != base.vars)
                    throw ProtocolError("pc: bad opening point");
                std::vector<Fp> yu(mine), yv(mine);
                for (std::size_t j = 0; j < mine; ++j) {
                    yu[j] = mle_evaluate(wit[j], u_red);
                    yv[j] = mle_evaluate(wit[j], v_red);
                }
                {
                    ByteWriter w;
                    w.fps(yu);
                    w.fps(yv);
                    ch.send(Frame{TAG_PC_YS, std::move(w.bytes)});
                }
                Frame f_rg = recv_expect(ch, TAG_PC_GAMMA, 0);
                ByteReader rg(f_rg.payload);
                Fp gamma = rg.fp();
                reader_done(rg, "pc gamma");

                auto eq = beta_table(u_red);
                auto eq2 = beta_table_scaled(v_red, gamma);
                for (std::size_t i = 0; i < eq.size(); ++i) eq[i] += eq2[i];

                ByteWriter w;
                w.u64(mine);
                for (std::size_t j = 0; j < mine; ++j) {
                    UniDecomp d = univariate_decompose(f_coeffs[j], eq);
                    if (d.y != yu[j] + gamma * yv[j])
                        throw ProtocolError("pc: decomposition sum mismatch");
                    w.fps(fft_evaluate(d.h_coeffs, l_dom));
                    w.fps(d.h_coeffs);
                    w.fps(d.g_coeffs);
                }
                ch.send(Frame{TAG_PC_H, std::move(w.bytes)});
                break;
            }
            case TAG_FINISH: {
                ByteWriter w;
                w.u64(stats.gates_evaluated);
                ch.send(Frame{TAG_STATS, std::move(w.bytes)});
                return stats;
            }
            default:
                throw ProtocolError("worker: unexpected frame tag " + std::to_string(f.tag));
        }
    }
}

Compressor::Envelope Compressor::compress(const DeVirgoProof& proof) const {
    Envelope e;
    e.payload = proof.serialize();
    e.inner_size = e.payload.size();
    return e;
}

} // namespace zkb
