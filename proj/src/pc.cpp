#include "zkb/pc.hpp"

#include <algorithm>
#include <stdexcept>

#include "zkb/util.hpp"

namespace zkb {

using namespace pc_detail;

void PcParams::validate() const {
    if (vars == 0 || vars > 28) throw std::invalid_argument("pc: unsupported variable count");
    if (!is_power_of_two(rho) || rho < 2) throw std::invalid_argument("pc: rate must be a power of two >= 2");
    if (queries == 0) throw std::invalid_argument("pc: need at least one query");
    if (log2_exact(rho) + vars > 32) throw std::invalid_argument("pc: L exceeds the field 2-adicity");
}

namespace pc_detail {

std::vector<std::uint8_t> fp_leaf(Fp v) {
    std::vector<std::uint8_t> out;
    fp_serialize(v, out);
    return out;
}

UniDecomp univariate_decompose(std::span<const Fp> f_coeffs, std::span<const Fp> eq_on_h) {
    std::size_t m = f_coeffs.size();
    if (eq_on_h.size() != m) throw std::invalid_argument("pc: weight table size mismatch");
    auto h_dom = EvaluationDomain::subgroup_h(m);
    auto h2_dom = EvaluationDomain::subgroup_h(2 * m);

    auto w_coeffs = ifft_interpolate(std::vector<Fp>(eq_on_h.begin(), eq_on_h.end()), h_dom);
    auto fe = fft_evaluate(std::vector<Fp>(f_coeffs.begin(), f_coeffs.end()), h2_dom);
    auto we = fft_evaluate(w_coeffs, h2_dom);
    for (std::size_t i = 0; i < fe.size(); ++i) fe[i] *= we[i];
    auto q = ifft_interpolate(fe, h2_dom); // f_U * w, degree <= 2m-2

    UniDecomp d;
    d.h_coeffs.resize(m);
    d.g_coeffs.resize(m - 1);
    std::vector<Fp> rem(m);
    for (std::size_t i = 0; i < m; ++i) {
        d.h_coeffs[i] = q[m + i];
        rem[i] = q[i] + q[m + i];
    }
    d.y = rem[0] * Fp(m);
    for (std::size_t j = 0; j + 1 < m; ++j) d.g_coeffs[j] = rem[j + 1];
    return d;
}

Fp weight_eval(std::span<const Fp> eq_on_h, Fp x) {
    std::size_t m = eq_on_h.size();
    Fp omega = EvaluationDomain::root_of_unity(log2_exact(m));
    Fp zh = x.pow(m) - Fp::one();
    Fp acc = Fp::zero();
    Fp wi = Fp::one();
    for (std::size_t i = 0; i < m; ++i) {
        acc += eq_on_h[i] * wi * (x - wi).inverse();
        wi *= omega;
    }
    return zh * Fp(m).inverse() * acc;
}

std::vector<Fp> combine_hg(const UniDecomp& d, Fp delta) {
    std::size_t m = d.h_coeffs.size();
    // x*(h + delta*g): degree <= m-1 for honest h (h_coeffs[m-1] is zero)
    std::vector<Fp> g(m, Fp::zero());
    for (std::size_t j = 0; j + 1 < m; ++j) g[j + 1] = d.h_coeffs[j] + delta * d.g_coeffs[j];
    return g;
}

Fp derive_g0(Fp x, Fp f_val, Fp h_val, Fp w_val, Fp zh, Fp delta, Fp y_over_m) {
    return x * h_val + delta * (f_val * w_val - h_val * zh - y_over_m);
}

std::vector<Fp> fri_fold(std::span<const Fp> layer, Fp chal, Fp offset, Fp gen) {
    std::size_t half = layer.size() / 2;
    static const Fp inv2 = Fp(2).inverse();
    Fp xinv = offset.inverse();
    Fp geninv = gen.inverse();
    std::vector<Fp> out(half);
    for (std::size_t j = 0; j < half; ++j) {
        Fp a = layer[j], b = layer[j + half];
        out[j] = (a + b) * inv2 + chal * (a - b) * inv2 * xinv;
        xinv *= geninv;
    }
    return out;
}

Fp fri_fold_pair(Fp lo, Fp hi, Fp chal, Fp x) {
    static const Fp inv2 = Fp(2).inverse();
    return (lo + hi) * inv2 + chal * (lo - hi) * inv2 * x.inverse();
}

bool final_layer_low_degree(std::span<const Fp> layer, Fp offset, std::size_t bound) {
    auto dom = EvaluationDomain::coset(layer.size(), offset);
    auto coeffs = ifft_interpolate(std::vector<Fp>(layer.begin(), layer.end()), dom);
    for (std::size_t j = bound; j < coeffs.size(); ++j)
        if (!coeffs[j].is_zero()) return false;
    return true;
}

} // namespace pc_detail

std::pair<PcCommitment, PcProverState> pc_commit(const MultilinearTable& table,
                                                 const PcParams& params) {
    params.validate();
    if (table.num_vars != params.vars) throw std::invalid_argument("pc: table/params mismatch");
    auto h_dom = EvaluationDomain::subgroup_h(params.h_order());
    auto l_dom = EvaluationDomain::coset_l(params.l_order());
    auto f_coeffs = ifft_interpolate(table.evals, h_dom);
    auto f_l = fft_evaluate(f_coeffs, l_dom);
    std::vector<std::vector<std::uint8_t>> leaves;
    leaves.reserve(f_l.size());
    for (Fp v : f_l) leaves.push_back(fp_leaf(v));
    PcProverState state{params, table.evals, std::move(f_coeffs), std::move(f_l),
                        MerkleTree(leaves)};
    return {PcCommitment{state.tree.root()}, std::move(state)};
}

std::size_t PcOpeningProof::opened_path_count() const {
    std::size_t n = 0;
    for (const PcQuery& q : queries) n += 4 + 2 * q.fold_paths.size();
    return n;
}

std::size_t pc_expected_paths(const PcParams& params) {
    std::size_t t = params.fold_count();
    return params.queries * (4 + 2 * (t > 0 ? t - 1 : 0));
}

namespace {

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

// Combined evaluation claim: ys absorbed, then a batching scalar when two
// points are opened. Returns (eq table on H, combined y).
std::pair<std::vector<Fp>, Fp> combine_claims(std::span<const std::span<const Fp>> points,
                                              std::span<const Fp> ys, Transcript& tr) {
    for (Fp y : ys) tr.absorb(y);
    auto eq = beta_table(points[0]);
    Fp y = ys[0];
    if (points.size() == 2) {
        Fp gamma = tr.challenge_fp();
        auto eq2 = beta_table_scaled(points[1], gamma);
        for (std::size_t i = 0; i < eq.size(); ++i) eq[i] += eq2[i];
        y += gamma * ys[1];
    }
    return {std::move(eq), y};
}

std::pair<std::vector<Fp>, PcOpeningProof> open_impl(const PcProverState& state,
                                                     std::span<const std::span<const Fp>> points,
                                                     Transcript& tr) {
    const PcParams& p = state.params;
    std::size_t big = p.l_order();
    tr.absorb(state.tree.root().digest);

    std::vector<Fp> ys;
    for (auto pt : points) ys.push_back(mle_evaluate(state.table, pt));
    auto [eq, y_comb] = combine_claims(points, ys, tr);

    UniDecomp d = univariate_decompose(state.f_coeffs, eq);
    if (d.y != y_comb) throw std::logic_error("pc: decomposition sum mismatch");

    auto l_dom = EvaluationDomain::coset_l(big);
    auto h_l = fft_evaluate(d.h_coeffs, l_dom);
    std::vector<std::vector<std::uint8_t>> h_leaves;
    h_leaves.reserve(big);
    for (Fp v : h_l) h_leaves.push_back(fp_leaf(v));
    MerkleTree h_tree(h_leaves);

    PcOpeningProof proof;
    proof.h_root = h_tree.root();
    tr.absorb(proof.h_root.digest);
    Fp delta = tr.challenge_fp();

    std::vector<std::vector<Fp>> layers;
    layers.push_back(fft_evaluate(combine_hg(d, delta), l_dom));
    std::vector<MerkleTree> fold_trees;
    std::size_t t = p.fold_count();
    Fp offset = l_dom.offset(), gen = l_dom.generator();
    for (std::size_t i = 0; i < t; ++i) {
        if (i > 0) {
            std::vector<std::vector<std::uint8_t>> leaves;
            leaves.reserve(layers[i].size());
            for (Fp v : layers[i]) leaves.push_back(fp_leaf(v));
            fold_trees.emplace_back(leaves);
            proof.fold_roots.push_back(fold_trees.back().root());
            tr.absorb(fold_trees.back().root().digest);
        }
        Fp chal = tr.challenge_fp();
        layers.push_back(fri_fold(layers[i], chal, offset, gen));
        offset *= offset;
        gen *= gen;
    }
    proof.final_layer = layers.back();
    tr.absorb(std::span<const Fp>(proof.final_layer));

    for (std::size_t qi = 0; qi < p.queries; ++qi) {
        std::size_t k = tr.challenge_index(big);
        std::size_t pos = k % (big / 2);
        PcQuery q;
        q.f_lo = state.f_l[pos];
        q.f_hi = state.f_l[pos + big / 2];
        q.f_path_lo = state.tree.open(pos);
        q.f_path_hi = state.tree.open(pos + big / 2);
        q.h_lo = h_l[pos];
        q.h_hi = h_l[pos + big / 2];
        q.h_path_lo = h_tree.open(pos);
        q.h_path_hi = h_tree.open(pos + big / 2);
        std::size_t prev = pos;
        for (std::size_t i = 1; i < t; ++i) {
            std::size_t sz = big >> i;
            std::size_t pi = prev % (sz / 2);
            q.fold_values.push_back({layers[i][pi], layers[i][pi + sz / 2]});
            q.fold_paths.push_back({fold_trees[i - 1].open(pi), fold_trees[i - 1].open(pi + sz / 2)});
            prev = pi;
        }
        proof.queries.push_back(std::move(q));
    }
    return {std::move(ys), std::move(proof)};
}

bool verify_impl(const PcCommitment& com, std::span<const std::span<const Fp>> points,
                 std::span<const Fp> ys, const PcOpeningProof& proof, const PcParams& p,
                 Transcript& tr) {
    std::size_t m = p.h_order(), big = p.l_order();
    std::size_t t = p.fold_count();
    if (proof.fold_roots.size() != (t > 0 ? t - 1 : 0)) return false;
    if (proof.final_layer.size() != (big >> t)) return false;
    if (proof.queries.size() != p.queries) return false;
    for (auto pt : points)
        if (pt.size() != p.vars) return false;

    tr.absorb(com.root.digest);
    auto [eq, y_comb] = combine_claims(points, ys, tr);

    tr.absorb(proof.h_root.digest);
    Fp delta = tr.challenge_fp();

    std::vector<Fp> chals;
    for (std::size_t i = 0; i < t; ++i) {
        if (i > 0) tr.absorb(proof.fold_roots[i - 1].digest);
        chals.push_back(tr.challenge_fp());
    }
    tr.absorb(std::span<const Fp>(proof.final_layer));

    // final layer must be low-degree: deg G < m, halved per fold
    Fp final_offset = Fp(EvaluationDomain::COSET_OFFSET).pow(std::uint64_t{1} << t);
    std::size_t bound = std::max<std::size_t>(1, m >> t);
    if (!final_layer_low_degree(proof.final_layer, final_offset, bound)) return false;

    auto l_dom = EvaluationDomain::coset_l(big);
    Fp y_over_m = y_comb * Fp(m).inverse();

    for (const PcQuery& q : proof.queries) {
        std::size_t k = tr.challenge_index(big);
        std::size_t pos = k % (big / 2);

        if (q.f_path_lo.leaf_index != pos || q.f_path_hi.leaf_index != pos + big / 2 ||
            q.h_path_lo.leaf_index != pos || q.h_path_hi.leaf_index != pos + big / 2)
            return false;
        if (!mt_verify(q.f_path_lo, fp_leaf(q.f_lo), com.root) ||
            !mt_verify(q.f_path_hi, fp_leaf(q.f_hi), com.root) ||
            !mt_verify(q.h_path_lo, fp_leaf(q.h_lo), proof.h_root) ||
            !mt_verify(q.h_path_hi, fp_leaf(q.h_hi), proof.h_root))
            return false;

        Fp x = l_dom.element(pos);
        Fp xn = l_dom.element(pos + big / 2); // = -x
        Fp g_lo = derive_g0(x, q.f_lo, q.h_lo, weight_eval(eq, x), x.pow(m) - Fp::one(), delta,
                            y_over_m);
        Fp g_hi = derive_g0(xn, q.f_hi, q.h_hi, weight_eval(eq, xn), xn.pow(m) - Fp::one(), delta,
                            y_over_m);

        if (t == 0) {
            if (proof.final_layer[pos] != g_lo || proof.final_layer[pos + big / 2] != g_hi)
                return false;
            continue;
        }
        if (q.fold_values.size() != t - 1 || q.fold_paths.size() != t - 1) return false;

        Fp cur = fri_fold_pair(g_lo, g_hi, chals[0], x);
        std::size_t prev = pos;
        Fp offset_i = Fp(EvaluationDomain::COSET_OFFSET);
        for (std::size_t i = 1; i < t; ++i) {
            offset_i *= offset_i;
            std::size_t sz = big >> i;
            std::size_t pi = prev % (sz / 2);
            const auto& vals = q.fold_values[i - 1];
            const auto& paths = q.fold_paths[i - 1];
            if (paths[0].leaf_index != pi || paths[1].leaf_index != pi + sz / 2) return false;
            if (!mt_verify(paths[0], fp_leaf(vals[0]), proof.fold_roots[i - 1]) ||
                !mt_verify(paths[1], fp_leaf(vals[1]), proof.fold_roots[i - 1]))
                return false;
            Fp expected = prev == pi ? vals[0] : vals[1];
            if (expected != cur) return false;
            Fp gen_i = EvaluationDomain::root_of_unity(log2_exact(sz));
            Fp xi = offset_i * gen_i.pow(pi);
            cur = fri_fold_pair(vals[0], vals[1], chals[i], xi);
            prev = pi;
        }
        if (proof.final_layer[prev] != cur) return false;
    }
    return true;
}

} // namespace

std::pair<Fp, PcOpeningProof> pc_open(const PcProverState& state, std::span<const Fp> r,
                                      Transcript& tr) {
    std::span<const Fp> pts[1] = {r};
    auto [ys, proof] = open_impl(state, pts, tr);
    return {ys[0], std::move(proof)};
}

bool pc_verify(const PcCommitment& com, std::span<const Fp> r, Fp y, const PcOpeningProof& proof,
               const PcParams& params, Transcript& tr) {
    std::span<const Fp> pts[1] = {r};
    Fp ys[1] = {y};
    return verify_impl(com, pts, ys, proof, params, tr);
}

PcBatchOpening pc_batch_open(const PcProverState& state, std::span<const Fp> u,
                             std::span<const Fp> v, Transcript& tr) {
    std::span<const Fp> pts[2] = {u, v};
    auto [ys, proof] = open_impl(state, pts, tr);
    return {ys[0], ys[1], std::move(proof)};
}

bool pc_batch_verify(const PcCommitment& com, std::span<const Fp> u, std::span<const Fp> v,
                     Fp y_u, Fp y_v, const PcOpeningProof& proof, const PcParams& params,
                     Transcript& tr) {
    std::span<const Fp> pts[2] = {u, v};
    Fp ys[2] = {y_u, y_v};
    return verify_impl(com, pts, ys, proof, params, tr);
}

void PcOpeningProof::serialize(ByteWriter& w) const {
    w.digest(h_root.digest);
    w.u64(fold_roots.size());
    for (const auto& r : fold_roots) w.digest(r.digest);
    w.fps(final_layer);
    w.u64(queries.size());
    for (const PcQuery& q : queries) {
        w.fp(q.f_lo);
        w.fp(q.f_hi);
        write_path(w, q.f_path_lo);
        write_path(w, q.f_path_hi);
        w.fp(q.h_lo);
        w.fp(q.h_hi);
        write_path(w, q.h_path_lo);
        write_path(w, q.h_path_hi);
        w.u64(q.fold_values.size());
        for (std::size_t i = 0; i < q.fold_values.size(); ++i) {
            w.fp(q.fold_values[i][0]);
            w.fp(q.fold_values[i][1]);
            write_path(w, q.fold_paths[i][0]);
            write_path(w, q.fold_paths[i][1]);
        }
    }
}

PcOpeningProof PcOpeningProof::deserialize(ByteReader& r) {
    PcOpeningProof p;
    p.h_root.digest = r.digest();
    std::uint64_t nroots = r.u64();
    if (nroots > 64) throw std::invalid_argument("pc proof: too many fold roots");
    for (std::uint64_t i = 0; i < nroots; ++i) p.fold_roots.push_back({r.digest()});
    p.final_layer = r.fps();
    std::uint64_t nq = r.u64();
    if (nq > 4096) throw std::invalid_argument("pc proof: too many queries");
    for (std::uint64_t i = 0; i < nq; ++i) {
        PcQuery q;
        q.f_lo = r.fp();
        q.f_hi = r.fp();
        q.f_path_lo = read_path(r);
        q.f_path_hi = read_path(r);
        q.h_lo = r.fp();
        q.h_hi = r.fp();
        q.h_path_lo = read_path(r);
        q.h_path_hi = read_path(r);
        std::uint64_t nf = r.u64();
        if (nf > 64) throw std::invalid_argument("pc proof: too many fold layers");
        for (std::uint64_t j = 0; j < nf; ++j) {
            std::array<Fp, 2> vals{r.fp(), r.fp()};
            std::array<MerklePath, 2> paths{read_path(r), read_path(r)};
            q.fold_values.push_back(vals);
            q.fold_paths.push_back(std::move(paths));
        }
        p.queries.push_back(std::move(q));
    }
    return p;
}

} // namespace zkb
