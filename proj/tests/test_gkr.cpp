#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "zkb/gkr.hpp"
#include "zkb/lightcc.hpp"
#include "zkb/mle.hpp"
#include "zkb/util.hpp"

using namespace zkb;
using namespace test_helpers;

namespace {

std::mt19937_64 rng(0x5eed6);

Transcript fresh(const std::string& id = "prover-1") {
    return Transcript("test.gkr", bytes_of(id));
}

bool roundtrip(const DataParallelCircuit& c, std::span<const Fp> input,
               const std::string& id = "prover-1") {
    Transcript tp = fresh(id);
    auto proof = gkr_prove(c, input, tp);
    Transcript tv = fresh(id);
    return gkr_verify(c, proof.output, input, proof, tv);
}

} // namespace

TEST_CASE("x1*x2+x3 on (2,3,4): claimed 10 accepted, 11 rejected") {
    auto c = replicate(mul_add_circuit(), 1);
    std::vector<Fp> input{Fp(2), Fp(3), Fp(4), Fp(0)};
    Transcript tp = fresh();
    auto proof = gkr_prove(c, input, tp);
    REQUIRE(proof.output == std::vector<Fp>{Fp(10)});
    Transcript tv = fresh();
    CHECK(gkr_verify(c, proof.output, input, proof, tv));

    Transcript tv2 = fresh();
    CHECK(!gkr_verify(c, std::vector<Fp>{Fp(11)}, input, proof, tv2));
}

TEST_CASE("2-layer random circuits, 100 random inputs all accepted") {
    auto c = replicate(random_circuit(rng, {2, 4, 4}), 1);
    for (int trial = 0; trial < 100; ++trial)
        CHECK(roundtrip(c, random_fps(rng, 4), "prover-" + std::to_string(trial)));
}

TEST_CASE("completeness over random shapes, depth <= 4, width <= 64") {
    std::vector<std::vector<std::size_t>> shapes{
        {1, 2, 2},
        {4, 8, 16, 8},
        {2, 16, 64, 32},
        {8, 8, 8, 8, 8},
    };
    for (const auto& shape : shapes) {
        auto c = replicate(random_circuit(rng, shape), 1);
        for (int trial = 0; trial < 5; ++trial)
            CHECK(roundtrip(c, random_fps(rng, shape.back())));
    }
}

TEST_CASE("data-parallel circuits verify") {
    auto sub = random_circuit(rng, {2, 4, 8});
    for (std::size_t n : {2u, 4u, 8u}) {
        auto c = replicate(sub, n);
        CHECK(roundtrip(c, random_fps(rng, c.input_size())));
    }
}

TEST_CASE("tampered layer claim rejected") {
    auto c = replicate(random_circuit(rng, {4, 8, 8}), 2);
    auto input = random_fps(rng, c.input_size());
    Transcript tp = fresh();
    auto proof = gkr_prove(c, input, tp);

    for (std::size_t layer = 0; layer < proof.layers.size(); ++layer) {
        auto bad = proof;
        bad.layers[layer].claim_u += Fp::one();
        Transcript tv = fresh();
        CHECK(!gkr_verify(c, bad.output, input, bad, tv));
        bad = proof;
        bad.layers[layer].phase_x.claimed_sum += Fp::one();
        Transcript tv2 = fresh();
        CHECK(!gkr_verify(c, bad.output, input, bad, tv2));
    }
    // wrong witness behind a correct-looking claim
    auto other = random_fps(rng, c.input_size());
    Transcript tv3 = fresh();
    CHECK(!gkr_verify(c, proof.output, other, proof, tv3));
}

TEST_CASE("layer claims match true layer-value MLEs (verifier replay)") {
    auto c = replicate(random_circuit(rng, {4, 8, 16, 8}), 2);
    auto input = random_fps(rng, c.input_size());
    auto vals = circuit_evaluate(c, input);
    Transcript tp = fresh();
    auto proof = gkr_prove(c, input, tp);

    // independent replay of the verifier's challenge schedule
    Transcript tr = fresh();
    tr.absorb(std::span<const Fp>(proof.output));
    (void)tr.challenge_fps(log2_exact(proof.output.size()));
    for (std::size_t i = 0; i < c.depth(); ++i) {
        const auto& lp = proof.layers[i];
        std::size_t vars = log2_exact(c.fanin_size(i));
        auto vx = sumcheck_verify(lp.phase_x, vars, tr);
        auto vy = sumcheck_verify(lp.phase_y, vars, tr);
        REQUIRE(vx.ok);
        REQUIRE(vy.ok);
        CHECK(lp.claim_u == mle_evaluate(vals.layers[i + 1], vx.point));
        CHECK(lp.claim_v == mle_evaluate(vals.layers[i + 1], vy.point));
        tr.absorb(lp.claim_u);
        tr.absorb(lp.claim_v);
        if (i + 1 < c.depth()) (void)tr.challenge_fps(2);
    }
}

TEST_CASE("proofs are deterministic and identity-bound") {
    auto c = replicate(random_circuit(rng, {2, 4, 4}), 1);
    auto input = random_fps(rng, 4);
    Transcript t1 = fresh("alice"), t2 = fresh("alice"), t3 = fresh("bob");
    auto p1 = gkr_prove(c, input, t1);
    auto p2 = gkr_prove(c, input, t2);
    auto p3 = gkr_prove(c, input, t3);
    CHECK(p1 == p2);
    CHECK(!(p1 == p3));
    // alice's proof fails under bob's transcript
    Transcript tv = fresh("bob");
    CHECK(!gkr_verify(c, p1.output, input, p1, tv));
}

TEST_CASE("serialization round-trip") {
    auto c = replicate(random_circuit(rng, {2, 4, 8}), 4);
    auto input = random_fps(rng, c.input_size());
    Transcript tp = fresh();
    auto proof = gkr_prove(c, input, tp);
    ByteWriter w;
    proof.serialize(w);
    ByteReader r(w.bytes);
    auto back = GkrProof::deserialize(r);
    CHECK(r.done());
    CHECK(back == proof);
    Transcript tv = fresh();
    CHECK(gkr_verify(c, back.output, input, back, tv));
}

TEST_CASE("light-client circuit proves end to end") {
    auto dp = build_light_client_circuit(2);
    Fp msg = Fp(77);
    std::vector<Fp> input;
    for (int i = 0; i < 2; ++i) {
        Fp sk = random_fp(rng);
        auto copy = lc_copy_input(msg, lc_keygen(sk), lc_sign(sk, msg), sk);
        input.insert(input.end(), copy.begin(), copy.end());
    }
    Transcript tp = fresh();
    auto proof = gkr_prove(dp, input, tp);
    CHECK(proof.output == std::vector<Fp>(4, Fp::one()));
    Transcript tv = fresh();
    CHECK(gkr_verify(dp, proof.output, input, proof, tv));
}
