#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "zkb/bridge/scenario.hpp"
#include "zkb/lightcc.hpp"

using namespace zkb;

namespace {

const DeVirgoParams FAST{8, 4}; // small query count keeps the proof harness quick

ChainSim make_chain(std::uint64_t seed = 7) { return ChainSim(ChainParams{4, 3, seed}); }

UpdaterParams fast_params() {
    UpdaterParams p;
    p.proof = FAST;
    return p;
}

Relay make_relay(std::size_t slot = 0) {
    std::string s = "relay-" + std::to_string(slot);
    return Relay{{s.begin(), s.end()}, 4, FAST};
}

LightClientState lcs_at(const ChainSim& chain, std::uint64_t prev_height) {
    LightClientState lcs;
    lcs.committee_commitment = chain.header(prev_height).validator_commitment;
    lcs.latest = chain.header(prev_height).digest();
    lcs.height = prev_height;
    lcs.committee_size = chain.params().committee_size;
    lcs.quorum = chain.params().quorum;
    return lcs;
}

// honest single-header envelope for canonical height h
RelayEnvelope honest_envelope(const ChainSim& chain, std::uint64_t h, std::size_t slot = 0) {
    HeaderView v = chain.view(h);
    return relay_prove_headers(make_relay(slot), {&v, 1}, chain.header(h - 1).digest());
}

} // namespace

TEST_CASE("chain simulator produces linked, signed, deterministic blocks") {
    auto chain = make_chain();
    CHECK(chain.genesis().height == 0);
    CHECK(chain.genesis().parent == Digest{});

    const auto& b1 = chain.produce_block({{'a'}, {'b'}, {'c'}, {'d'}});
    CHECK(b1.height == 1);
    CHECK(b1.parent == chain.genesis().digest());
    CHECK(b1.signatures.size() == 3);

    // tx tree round trip
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(mt_verify(chain.tx_path(1, i), chain.body(1).txs[i], b1.tx_root));
    CHECK(!mt_verify(chain.tx_path(1, 0), chain.body(1).txs[1], b1.tx_root));

    // fork children of the same parent have distinct digests
    const auto& b2 = chain.produce_block({{'e'}});
    const auto& f2 = chain.produce_fork_block(1, {{'z'}});
    CHECK(f2.height == b2.height);
    CHECK(f2.parent == b2.parent);
    CHECK(f2.digest() != b2.digest());

    // same seed, same chain
    auto chain2 = make_chain();
    chain2.produce_block({{'a'}, {'b'}, {'c'}, {'d'}});
    CHECK(chain2.header(1) == chain.header(1));
    CHECK(!(make_chain(8).genesis() == chain.genesis()));
}

TEST_CASE("light-client rule accepts honest blocks and enforces the quorum") {
    auto chain = make_chain();
    chain.produce_block({{'t'}});
    HeaderView v = chain.view(1);
    LightClientState lcs = lcs_at(chain, 0);

    CHECK(light_cc(lcs, chain.genesis(), v.header, v.committee, v.signer_secrets));
    CHECK(light_cc_public(lcs, chain.genesis(), v.header, v.committee));

    // every sub-quorum signer subset fails the count check
    for (std::size_t drop = 0; drop < v.header.signatures.size(); ++drop) {
        BlockHeader h = v.header;
        h.signatures.erase(h.signatures.begin() + drop);
        CHECK(!light_cc_public(lcs, chain.genesis(), h, v.committee));
    }

    BlockHeader bad_parent = v.header;
    bad_parent.parent[0] ^= 1;
    CHECK(!light_cc_public(lcs, chain.genesis(), bad_parent, v.committee));

    BlockHeader bad_height = v.header;
    bad_height.height = 2;
    CHECK(!light_cc_public(lcs, chain.genesis(), bad_height, v.committee));

    BlockHeader dup = v.header;
    dup.signatures[1].first = dup.signatures[0].first;
    CHECK(!light_cc_public(lcs, chain.genesis(), dup, v.committee));

    // tampered signature passes the structural half but fails the full rule
    BlockHeader bad_sig = v.header;
    bad_sig.signatures[0].second += Fp::one();
    CHECK(light_cc_public(lcs, chain.genesis(), bad_sig, v.committee));
    CHECK(!light_cc(lcs, chain.genesis(), bad_sig, v.committee, v.signer_secrets));

    auto wrong_committee = v.committee;
    wrong_committee[0] += Fp::one();
    CHECK(!light_cc_public(lcs, chain.genesis(), v.header, wrong_committee));
}

TEST_CASE("header envelope round trip and updater acceptance") {
    auto chain = make_chain();
    chain.produce_block({{'t'}});
    Updater updater(chain.genesis(), fast_params());

    RelayEnvelope env = honest_envelope(chain, 1);

    // wire round trip
    ByteWriter w;
    env.serialize(w);
    ByteReader r(w.bytes);
    CHECK(RelayEnvelope::deserialize(r) == env);
    CHECK(r.done());

    auto before = updater.snapshot();
    REQUIRE(updater.header_update(env));
    CHECK(updater.dag().nodes.size() == 2);
    CHECK(updater.lcs().height == 1);
    CHECK(updater.lcs().latest == chain.header(1).digest());

    // duplicates are idempotent
    auto accepted_state = updater.snapshot();
    CHECK(updater.header_update(env));
    CHECK(updater.snapshot() == accepted_state);
    CHECK(updater.snapshot() != before);
}

TEST_CASE("updater rejects forged envelopes without touching state") {
    auto chain = make_chain();
    chain.produce_block({{'t'}});
    chain.produce_block({{'u'}});
    Updater updater(chain.genesis(), fast_params());
    RelayEnvelope env1 = honest_envelope(chain, 1);
    RelayEnvelope env2 = honest_envelope(chain, 2);

    // unknown parent: header 2 before header 1
    auto before = updater.snapshot();
    CHECK(!updater.header_update(env2));
    CHECK(updater.snapshot() == before);

    // tampered header byte: the spliced proof no longer matches
    RelayEnvelope bad = env1;
    bad.headers[0].tx_root.digest[5] ^= 1;
    CHECK(!updater.header_update(bad));

    // identity swap
    bad = env1;
    bad.identity = {'e', 'v', 'i', 'l'};
    CHECK(!updater.header_update(bad));

    // committee substitution
    bad = env1;
    bad.committees[0][0] += Fp::one();
    CHECK(!updater.header_update(bad));

    // junk proof bytes
    bad = env1;
    bad.proof.assign(37, 0xcc);
    CHECK(!updater.header_update(bad));

    CHECK(updater.snapshot() == before);
    CHECK(updater.rejected_count() == 5);

    // the honest pair still lands afterwards
    CHECK(updater.header_update(env1));
    CHECK(updater.header_update(env2));
    CHECK(updater.lcs().height == 2);
}

TEST_CASE("main chain selection on hand-built DAGs") {
    // headers chained by digest only; main_chain never looks at proofs
    auto link = [](HeaderDag& dag, const Digest& parent, std::uint64_t height, std::uint8_t tag) {
        BlockHeader h;
        h.height = height;
        h.parent = parent;
        h.validator_commitment[0] = tag;
        std::uint64_t w = dag.nodes.at(parent).weight + 1;
        Digest d = h.digest();
        dag.nodes.emplace(d, DagNode{h, {}, w});
        return d;
    };
    BlockHeader genesis;
    HeaderDag dag;
    dag.genesis = genesis.digest();
    dag.nodes.emplace(dag.genesis, DagNode{genesis, {}, 1});

    CHECK(main_chain(dag, 0).size() == 1); // just genesis
    CHECK(main_chain(dag, 2).size() == 1); // truncation never drops genesis

    // linear chain of 10 headers, K=2 keeps the first 8
    Digest cur = dag.genesis;
    for (std::uint64_t h = 1; h <= 9; ++h) cur = link(dag, cur, h, 0);
    CHECK(main_chain(dag, 0).size() == 10);
    auto mc = main_chain(dag, 2);
    REQUIRE(mc.size() == 8);
    for (std::uint64_t h = 0; h < 8; ++h) CHECK(mc[h].height == h);

    // fork of weight 5 vs canonical weight 10: canonical wins
    Digest fork = link(dag, dag.nodes.at(dag.genesis).header.digest(), 1, 9);
    for (std::uint64_t h = 2; h <= 4; ++h) fork = link(dag, fork, h, 9);
    auto full = main_chain(dag, 0);
    CHECK(full.size() == 10);
    CHECK(full.back().validator_commitment[0] == 0);

    // equal-weight tips: smaller digest wins
    HeaderDag tie;
    tie.genesis = genesis.digest();
    tie.nodes.emplace(tie.genesis, DagNode{genesis, {}, 1});
    Digest a = link(tie, tie.genesis, 1, 1);
    Digest b = link(tie, tie.genesis, 1, 2);
    auto winner = main_chain(tie, 0);
    REQUIRE(winner.size() == 2);
    CHECK(winner.back().digest() == std::min(a, b));
}

TEST_CASE("tx inclusion needs main-chain membership at confirmation depth") {
    auto chain = make_chain();
    auto lock = make_lock_tx("bob", 9, 1);
    chain.produce_block({lock, {'x'}});
    for (int i = 0; i < 2; ++i) chain.produce_block({{'c'}});

    Updater updater(chain.genesis(), fast_params());
    std::vector<FullNode> nodes(3, FullNode(&chain));
    Relay relay = make_relay();

    MerklePath path = chain.tx_path(1, 0);
    CHECK(!updater.verify_tx_inclusion(1, lock, path)); // nothing relayed yet

    while (updater.lcs().height < chain.tip_height())
        REQUIRE(batch_prove_and_update(relay, nodes, updater, 1));

    CHECK(updater.verify_tx_inclusion(1, lock, path));
    CHECK(!updater.verify_tx_inclusion(2, lock, path));       // different block
    CHECK(!updater.verify_tx_inclusion(3, lock, path));       // beyond depth K
    CHECK(!updater.verify_tx_inclusion(1, {{'x'}}, path));    // wrong tx bytes
    MerklePath shifted = chain.tx_path(1, 1);
    CHECK(!updater.verify_tx_inclusion(1, lock, shifted));    // shifted index

    // get_header: known, unknown, and fork headers
    auto got = updater.get_header(1);
    REQUIRE(got.has_value());
    CHECK(got->first == chain.header(1));
    CHECK(got->second == updater.lcs());
    CHECK(!updater.get_header(9).has_value());

    chain.produce_fork_block(1, {{'f'}});
    HeaderView fv = chain.fork_views()[0];
    REQUIRE(updater.header_update(
        relay_prove_headers(relay, {&fv, 1}, chain.header(1).digest())));
    CHECK(!updater.on_main_chain(fv.header.digest()));
    CHECK(updater.on_main_chain(chain.header(1).digest()));
}

TEST_CASE("batched updates are atomic and B=1 matches plain updates") {
    auto chain = make_chain();
    for (int i = 0; i < 4; ++i) chain.produce_block({{'t', static_cast<std::uint8_t>(i)}});
    std::vector<FullNode> nodes(3, FullNode(&chain));
    Relay relay = make_relay();

    // B=4 in one envelope
    Updater batched(chain.genesis(), fast_params());
    REQUIRE(batch_prove_and_update(relay, nodes, batched, 4));
    CHECK(batched.dag().nodes.size() == 5);
    CHECK(batched.lcs().height == 4);
    REQUIRE(batched.dag().batch_roots.size() == 1);
    std::vector<std::vector<std::uint8_t>> leaves;
    for (std::uint64_t h = 1; h <= 4; ++h) {
        Digest d = chain.header(h).digest();
        leaves.emplace_back(d.begin(), d.end());
    }
    CHECK(batched.dag().batch_roots.at(0) == mt_commit(leaves));

    // a broken middle link rejects the whole batch
    std::vector<HeaderView> views;
    for (std::uint64_t h = 1; h <= 4; ++h) views.push_back(chain.view(h));
    RelayEnvelope broken = relay_prove_headers(relay, views, chain.genesis().digest());
    broken.headers[2].parent[7] ^= 1;
    Updater fresh(chain.genesis(), fast_params());
    auto before = fresh.snapshot();
    CHECK(!fresh.header_update(broken));
    CHECK(fresh.snapshot() == before); // no partial insertion

    // B=1 batching goes through the same path as a plain header update
    Updater a(chain.genesis(), fast_params()), b(chain.genesis(), fast_params());
    REQUIRE(batch_prove_and_update(relay, nodes, a, 1));
    REQUIRE(b.header_update(honest_envelope(chain, 1)));
    CHECK(a.snapshot() == b.snapshot());
}

TEST_CASE("relay majority polling filters forged full nodes") {
    auto chain = make_chain();
    chain.produce_block({{'t'}});
    Relay relay = make_relay();
    Digest parent = chain.genesis().digest();

    std::vector<FullNode> honest(3, FullNode(&chain));
    RelayResult r1 = relay_next_header(relay, honest, 1, parent);
    REQUIRE(r1.status == RelayStatus::Ok);
    CHECK(r1.envelope.headers[0] == chain.header(1));

    // 1 of 3 forged: majority still yields the honest header
    std::vector<FullNode> mixed{FullNode(&chain, true), FullNode(&chain), FullNode(&chain)};
    RelayResult r2 = relay_next_header(relay, mixed, 1, parent);
    REQUIRE(r2.status == RelayStatus::Ok);
    CHECK(r2.envelope.headers[0] == chain.header(1));

    // 2 of 3 forged: the forged digest wins the vote but cannot be proven
    std::vector<FullNode> overrun{FullNode(&chain, true), FullNode(&chain, true),
                                  FullNode(&chain)};
    RelayResult r3 = relay_next_header(relay, overrun, 1, parent);
    CHECK(r3.status == RelayStatus::ProverFailure);

    // everyone behind the requested height
    CHECK(relay_next_header(relay, honest, 5, parent).status == RelayStatus::Behind);
}

TEST_CASE("snapshots restore exactly and replay is deterministic") {
    auto chain = make_chain();
    for (int i = 0; i < 3; ++i) chain.produce_block({{'s', static_cast<std::uint8_t>(i)}});

    std::vector<RelayEnvelope> envs;
    for (std::uint64_t h = 1; h <= 3; ++h) envs.push_back(honest_envelope(chain, h));

    Updater u1(chain.genesis(), fast_params());
    for (const auto& e : envs) REQUIRE(u1.header_update(e));
    auto snap = u1.snapshot();

    Updater u2 = Updater::restore(snap);
    CHECK(u2.snapshot() == snap);
    CHECK(u2.lcs() == u1.lcs());
    CHECK(u2.dag() == u1.dag());

    // restored state keeps accepting
    chain.produce_block({{'s', 3}});
    CHECK(u2.header_update(honest_envelope(chain, 4)));

    // same envelope sequence, fresh updater: byte-identical state
    Updater u3(chain.genesis(), fast_params());
    for (const auto& e : envs) REQUIRE(u3.header_update(e));
    CHECK(u3.snapshot() == snap);

    auto bad = snap;
    bad[0] ^= 1; // magic
    CHECK_THROWS_AS(Updater::restore(bad), std::invalid_argument);

    // per-update DAG work does not grow with the chain: the first and the
    // third update touch the same number of DAG entries
    Updater u4(chain.genesis(), fast_params());
    REQUIRE(u4.header_update(envs[0]));
    CHECK(u4.last_update_dag_ops() == u1.last_update_dag_ops());
}

TEST_CASE("lock-mint demo credits once and rejects replays") {
    auto out = lock_mint_demo(11, 5);
    CHECK(out.credited == 5);
    CHECK(out.premature_rejected);
    CHECK(out.replay_rejected);

    auto again = lock_mint_demo(11, 5);
    CHECK(again.credited == 5);
    CHECK(again.updater_snapshot == out.updater_snapshot);
}

TEST_CASE("scenario text format round trip and validation") {
    Scenario sc;
    sc.seed = 42;
    sc.blocks = 3;
    sc.queries = 4;
    Scenario back = Scenario::parse(sc.to_text());
    CHECK(back.seed == 42);
    CHECK(back.blocks == 3);
    CHECK(back.to_text() == sc.to_text());

    CHECK_THROWS_AS(Scenario::parse("bogus_key = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(Scenario::parse("seed == 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(Scenario::parse("seed\n"), std::invalid_argument);
    CHECK_THROWS_AS(Scenario::parse("quorum = 9\n"), std::invalid_argument);
    CHECK(Scenario::parse("# comment only\n\n").seed == 1);
}

TEST_CASE("scenario runs uphold consistency and liveness") {
    Scenario sc;
    sc.seed = 3;
    sc.blocks = 4;
    sc.forks = 1;
    sc.relays = 4;
    sc.honest_relays = 1;
    sc.queries = 4;

    auto rep = run_scenario(sc);
    CHECK(rep.consistency_ok);
    CHECK(rep.liveness_ok);
    CHECK(rep.forged_submitted > 0);
    CHECK(rep.forged_accepted == 0);
    CHECK(rep.final_chain.size() >= 1);
    CHECK(rep.render().find("VIOLATED") == std::string::npos);

    // deterministic replay
    auto rep2 = run_scenario(sc);
    CHECK(rep2.updater_snapshot == rep.updater_snapshot);
    CHECK(rep2.accepted == rep.accepted);
    CHECK(rep2.rejected == rep.rejected);

    // all-honest batch variant
    Scenario batch = sc;
    batch.relays = 1;
    batch.forks = 0;
    batch.batch = 4;
    auto rep3 = run_scenario(batch);
    CHECK(rep3.consistency_ok);
    CHECK(rep3.liveness_ok);
    CHECK(rep3.accepted == 1);
}

#ifdef SCENARIO_DIR
TEST_CASE("shipped scenario files load and behave as advertised") {
    auto happy = run_scenario(scenario_load(std::string(SCENARIO_DIR) + "/happy.txt"));
    CHECK(happy.rejected == 0);
    CHECK(happy.accepted >= 6);
    CHECK(happy.consistency_ok);
    CHECK(happy.liveness_ok);

    auto adv = run_scenario(scenario_load(std::string(SCENARIO_DIR) + "/adversarial.txt"));
    CHECK(adv.forged_submitted > 0);
    CHECK(adv.forged_accepted == 0);
    CHECK(adv.consistency_ok);
    CHECK(adv.liveness_ok);
}
#endif
