#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "zkb/pc.hpp"
#include "zkb/util.hpp"

using namespace zkb;
using namespace test_helpers;

namespace {

std::mt19937_64 rng(0x5eed7);

Transcript fresh(const std::string& id = "prover-1") {
    return Transcript("test.pc", bytes_of(id));
}

Fp horner(std::span<const Fp> coeffs, Fp x) {
    Fp acc = Fp::zero();
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

} // namespace

TEST_CASE("zero and constant tables commit to the expected leaf vectors") {
    PcParams p{3, 2, 4};
    auto [com0, st0] = pc_commit(MultilinearTable(3, std::vector<Fp>(8, Fp::zero())), p);
    CHECK(st0.f_l == std::vector<Fp>(16, Fp::zero()));
    std::vector<std::vector<std::uint8_t>> zero_leaves(16, pc_detail::fp_leaf(Fp::zero()));
    CHECK(com0.root == mt_commit(zero_leaves));

    Fp c = random_fp(rng);
    auto [com1, st1] = pc_commit(MultilinearTable(3, std::vector<Fp>(8, c)), p);
    CHECK(st1.f_l == std::vector<Fp>(16, c));
}

TEST_CASE("f_L matches naive evaluation on all of L (l=3, rho=4)") {
    PcParams p{3, 4, 4};
    auto table = random_fps(rng, 8);
    auto [com, st] = pc_commit(MultilinearTable(3, table), p);
    auto l_dom = EvaluationDomain::coset_l(32);
    for (std::size_t k = 0; k < 32; ++k) CHECK(st.f_l[k] == horner(st.f_coeffs, l_dom.element(k)));
    // f_U interpolates the table on H
    auto h_dom = EvaluationDomain::subgroup_h(8);
    for (std::size_t k = 0; k < 8; ++k) CHECK(horner(st.f_coeffs, h_dom.element(k)) == table[k]);
}

TEST_CASE("open at boolean point returns the table entry and verifies") {
    PcParams p{3, 2, 4};
    auto table = random_fps(rng, 8);
    auto [com, st] = pc_commit(MultilinearTable(3, table), p);
    std::vector<Fp> r{Fp(1), Fp(0), Fp(1)}; // index 5
    Transcript tp = fresh();
    auto [y, proof] = pc_open(st, r, tp);
    CHECK(y == table[5]);
    Transcript tv = fresh();
    CHECK(pc_verify(com, r, y, proof, p, tv));
}

TEST_CASE("completeness sweep: l <= 6, rho in {2,4}") {
    for (std::size_t vars = 1; vars <= 6; ++vars) {
        for (std::size_t rho : {2u, 4u}) {
            PcParams p{vars, rho, 4};
            for (int trial = 0; trial < 20; ++trial) {
                auto table = random_fps(rng, std::size_t{1} << vars);
                auto [com, st] = pc_commit(MultilinearTable(vars, table), p);
                auto r = random_fps(rng, vars);
                Transcript tp = fresh();
                auto [y, proof] = pc_open(st, r, tp);
                CHECK(y == mle_evaluate(table, r));
                CHECK(proof.opened_path_count() == pc_expected_paths(p));
                Transcript tv = fresh();
                CHECK(pc_verify(com, r, y, proof, p, tv));
            }
        }
    }
}

TEST_CASE("tampered value or proof bits rejected") {
    PcParams p{4, 4, 8};
    auto table = random_fps(rng, 16);
    auto [com, st] = pc_commit(MultilinearTable(4, table), p);
    auto r = random_fps(rng, 4);
    Transcript tp = fresh();
    auto [y, proof] = pc_open(st, r, tp);

    Transcript tv0 = fresh();
    REQUIRE(pc_verify(com, r, y, proof, p, tv0));

    Transcript tv1 = fresh();
    CHECK(!pc_verify(com, r, y + Fp::one(), proof, p, tv1));

    auto bad = proof;
    bad.queries[3].f_lo += Fp::one();
    Transcript tv2 = fresh();
    CHECK(!pc_verify(com, r, y, bad, p, tv2));

    bad = proof;
    bad.queries[0].h_path_hi.siblings[1][7] ^= 0x10;
    Transcript tv3 = fresh();
    CHECK(!pc_verify(com, r, y, bad, p, tv3));

    bad = proof;
    bad.final_layer[2] += Fp::one();
    Transcript tv4 = fresh();
    CHECK(!pc_verify(com, r, y, bad, p, tv4));

    bad = proof;
    bad.fold_roots[0].digest[0] ^= 1;
    Transcript tv5 = fresh();
    CHECK(!pc_verify(com, r, y, bad, p, tv5));

    // wrong evaluation point
    auto r2 = r;
    r2[1] += Fp::one();
    Transcript tv6 = fresh();
    CHECK(!pc_verify(com, r2, y, proof, p, tv6));
}

TEST_CASE("wrong-degree cheating prover is rejected at the expected rate") {
    // Commit a degree-|H| polynomial (honest f plus e*x^m) while opening
    // claims computed from the truncated degree-<|H| part.
    auto cheat_commit = [&](const PcParams& p) {
        auto table = random_fps(rng, p.h_order());
        auto [com, st] = pc_commit(MultilinearTable(p.vars, table), p);
        Fp e = random_fp(rng) + Fp::one();
        auto l_dom = EvaluationDomain::coset_l(p.l_order());
        std::vector<std::vector<std::uint8_t>> leaves;
        for (std::size_t k = 0; k < st.f_l.size(); ++k) {
            st.f_l[k] += e * l_dom.element(k).pow(p.h_order());
            leaves.push_back(pc_detail::fp_leaf(st.f_l[k]));
        }
        MerkleTree tree(leaves);
        PcCommitment com2{tree.root()};
        PcProverState st2{p, st.table, st.f_coeffs, st.f_l, std::move(tree)};
        return std::pair{com2, std::move(st2)};
    };

    // loose parameters so the per-trial escape probability is visible
    PcParams weak{3, 2, 2};
    int rejected = 0, trials = 1000;
    for (int t = 0; t < trials; ++t) {
        std::string id = "cheat-" + std::to_string(t);
        auto [com, st] = cheat_commit(weak);
        auto r = random_fps(rng, weak.vars);
        Transcript tp = fresh(id);
        auto [y, proof] = pc_open(st, r, tp);
        Transcript tv = fresh(id);
        if (!pc_verify(com, r, y, proof, weak, tv)) ++rejected;
    }
    // acceptance chance per trial is at most about (1/rho)^c = 1/4
    CHECK(rejected >= 600);

    // production-like query count: never accepted in 100 trials
    PcParams strong{3, 4, 16};
    for (int t = 0; t < 100; ++t) {
        std::string id = "cheat-strong-" + std::to_string(t);
        auto [com, st] = cheat_commit(strong);
        auto r = random_fps(rng, strong.vars);
        Transcript tp = fresh(id);
        auto [y, proof] = pc_open(st, r, tp);
        Transcript tv = fresh(id);
        CHECK(!pc_verify(com, r, y, proof, strong, tv));
    }
}

TEST_CASE("batch open: two points verify, u=v matches the single value") {
    PcParams p{3, 4, 8};
    auto table = random_fps(rng, 8);
    auto [com, st] = pc_commit(MultilinearTable(3, table), p);
    auto u = random_fps(rng, 3), v = random_fps(rng, 3);

    Transcript tp = fresh();
    auto batch = pc_batch_open(st, u, v, tp);
    CHECK(batch.y_u == mle_evaluate(table, u));
    CHECK(batch.y_v == mle_evaluate(table, v));
    Transcript tv = fresh();
    CHECK(pc_batch_verify(com, u, v, batch.y_u, batch.y_v, batch.proof, p, tv));

    Transcript tv2 = fresh();
    CHECK(!pc_batch_verify(com, u, v, batch.y_u, batch.y_v + Fp::one(), batch.proof, p, tv2));

    // u = v: both reported values equal the single-open value
    Transcript tp3 = fresh("same");
    auto same = pc_batch_open(st, u, u, tp3);
    CHECK(same.y_u == same.y_v);
    CHECK(same.y_u == mle_evaluate(table, u));
    Transcript tv3 = fresh("same");
    CHECK(pc_batch_verify(com, u, u, same.y_u, same.y_v, same.proof, p, tv3));
}

TEST_CASE("opening proof serialization round-trips") {
    PcParams p{4, 2, 4};
    auto table = random_fps(rng, 16);
    auto [com, st] = pc_commit(MultilinearTable(4, table), p);
    auto r = random_fps(rng, 4);
    Transcript tp = fresh();
    auto [y, proof] = pc_open(st, r, tp);
    ByteWriter w;
    proof.serialize(w);
    ByteReader rd(w.bytes);
    auto back = PcOpeningProof::deserialize(rd);
    CHECK(rd.done());
    CHECK(back == proof);
    Transcript tv = fresh();
    CHECK(pc_verify(com, r, y, back, p, tv));
}

TEST_CASE("serialized-proof bit flips never accepted") {
    PcParams p{3, 2, 4};
    auto table = random_fps(rng, 8);
    auto [com, st] = pc_commit(MultilinearTable(3, table), p);
    auto r = random_fps(rng, 3);
    Transcript tp = fresh();
    auto [y, proof] = pc_open(st, r, tp);
    ByteWriter w;
    proof.serialize(w);
    for (int trial = 0; trial < 300; ++trial) {
        auto bytes = w.bytes;
        bytes[rng() % bytes.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
        bool accepted = false;
        try {
            ByteReader rd(bytes);
            auto mutated = PcOpeningProof::deserialize(rd);
            if (rd.done() && !(mutated == proof)) {
                Transcript tv = fresh();
                accepted = pc_verify(com, r, y, mutated, p, tv);
            }
        } catch (const std::invalid_argument&) {
            // malformed encoding counts as rejected
        }
        CHECK(!accepted);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((PcParams{0, 2, 4}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((PcParams{3, 3, 4}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((PcParams{3, 2, 0}).validate(), std::invalid_argument);
    PcParams p{2, 2, 1};
    auto table = random_fps(rng, 8);
    CHECK_THROWS_AS((void)pc_commit(MultilinearTable(3, table), p), std::invalid_argument);
}
