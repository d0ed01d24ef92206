#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "zkb/mle.hpp"
#include "zkb/sumcheck.hpp"

using namespace zkb;
using namespace test_helpers;

namespace {

std::mt19937_64 rng(0x5eed5);

Transcript fresh(const std::string& id = "prover-1") {
    return Transcript("test.sumcheck", bytes_of(id));
}

// f(r) from the original tables, the verifier's final oracle.
Fp oracle_value(const QuadInstance& inst, std::span<const Fp> point) {
    Fp acc = Fp::zero();
    if (!inst.a.empty())
        acc += mle_evaluate(inst.a, point) * mle_evaluate(inst.b, point);
    if (!inst.c.empty()) acc += mle_evaluate(inst.c, point);
    return acc;
}

bool full_verify(const QuadInstance& inst, const SumcheckProof& proof, const std::string& id) {
    Transcript tr = fresh(id);
    auto res = sumcheck_verify(proof, inst.vars, tr);
    return res.ok && res.final_value == oracle_value(inst, res.point);
}

QuadInstance random_instance(std::size_t vars, bool with_product, bool with_linear) {
    QuadInstance inst;
    inst.vars = vars;
    std::size_t n = std::size_t{1} << vars;
    if (with_product) {
        inst.a = random_fps(rng, n);
        inst.b = random_fps(rng, n);
    }
    if (with_linear) inst.c = random_fps(rng, n);
    return inst;
}

} // namespace

TEST_CASE("multilinear table [1,2,3,4] sums to 10 and verifies") {
    QuadInstance inst{2, {}, {}, {Fp(1), Fp(2), Fp(3), Fp(4)}};
    Transcript tr = fresh();
    auto res = sumcheck_prove(inst, tr);
    CHECK(res.proof.claimed_sum == Fp(10));
    CHECK(res.proof.rounds.size() == 2);
    CHECK(full_verify(inst, res.proof, "prover-1"));
    CHECK(res.c_eval == mle_evaluate(inst.c, res.point));
}

TEST_CASE("zero table: zero sum and all-zero round polynomials") {
    QuadInstance inst{3, {}, {}, std::vector<Fp>(8, Fp::zero())};
    Transcript tr = fresh();
    auto res = sumcheck_prove(inst, tr);
    CHECK(res.proof.claimed_sum == Fp::zero());
    for (const RoundPoly& rp : res.proof.rounds) CHECK(rp == RoundPoly{});
    CHECK(full_verify(inst, res.proof, "prover-1"));
}

TEST_CASE("product of two multilinears, l=3") {
    auto inst = random_instance(3, true, false);
    Fp brute = Fp::zero();
    for (std::size_t i = 0; i < 8; ++i) brute += inst.a[i] * inst.b[i];
    Transcript tr = fresh();
    auto res = sumcheck_prove(inst, tr);
    CHECK(res.proof.claimed_sum == brute);
    CHECK(full_verify(inst, res.proof, "prover-1"));
    // final eval equals the product of the factor MLEs at r
    CHECK(res.a_eval * res.b_eval ==
          mle_evaluate(inst.a, res.point) * mle_evaluate(inst.b, res.point));
}

TEST_CASE("mixed product-plus-linear instances verify, various sizes") {
    for (std::size_t vars : {1u, 2u, 5u, 8u}) {
        auto inst = random_instance(vars, true, true);
        Transcript tr = fresh();
        auto res = sumcheck_prove(inst, tr);
        CHECK(res.proof.rounds.size() == vars);
        CHECK(full_verify(inst, res.proof, "prover-1"));
    }
}

TEST_CASE("claim tampering rejected") {
    auto inst = random_instance(4, true, true);
    Transcript tr = fresh();
    auto res = sumcheck_prove(inst, tr);
    auto bad = res.proof;
    bad.claimed_sum += Fp::one();
    CHECK(!full_verify(inst, bad, "prover-1"));
}

TEST_CASE("any single mutated round coefficient rejected") {
    for (int trial = 0; trial < 100; ++trial) {
        std::string id = "prover-" + std::to_string(trial);
        auto inst = random_instance(4, true, true);
        Transcript tr = fresh(id);
        auto res = sumcheck_prove(inst, tr);
        REQUIRE(full_verify(inst, res.proof, id));
        auto bad = res.proof;
        auto& rp = bad.rounds[rng() % bad.rounds.size()];
        Fp delta = random_fp(rng) + Fp::one();
        switch (rng() % 4) {
            case 0: rp.c0 += delta; break;
            case 1: rp.c1 += delta; break;
            case 2: rp.c2 += delta; break;
            default: // sum-preserving pair mutation, must fail at the oracle
                rp.c0 += delta;
                rp.c1 -= delta + delta;
                break;
        }
        CHECK(!full_verify(inst, bad, id));
    }
}

TEST_CASE("transcript determinism and identity binding") {
    auto inst = random_instance(5, true, false);
    Transcript tr1 = fresh("alice");
    Transcript tr2 = fresh("alice");
    Transcript tr3 = fresh("bob");
    auto r1 = sumcheck_prove(inst, tr1);
    auto r2 = sumcheck_prove(inst, tr2);
    auto r3 = sumcheck_prove(inst, tr3);
    CHECK(r1.proof == r2.proof);
    CHECK(r1.point == r2.point);
    CHECK(r1.point != r3.point);
    // a proof bound to alice does not verify under bob's identity
    CHECK(full_verify(inst, r1.proof, "alice"));
    CHECK(!full_verify(inst, r1.proof, "bob"));
}

TEST_CASE("serialization round-trip") {
    auto inst = random_instance(6, true, true);
    Transcript tr = fresh();
    auto res = sumcheck_prove(inst, tr);
    ByteWriter w;
    res.proof.serialize(w);
    ByteReader r(w.bytes);
    CHECK(SumcheckProof::deserialize(r) == res.proof);
    CHECK(r.done());
}

TEST_CASE("instance validation") {
    QuadInstance bad{2, random_fps(rng, 4), {}, {}};
    Transcript tr = fresh();
    CHECK_THROWS_AS((void)sumcheck_prove(bad, tr), std::invalid_argument);
    QuadInstance bad2{2, random_fps(rng, 4), random_fps(rng, 2), {}};
    CHECK_THROWS_AS((void)sumcheck_prove(bad2, tr), std::invalid_argument);
}
