#pragma once

#include <string>

#include "zkb/bridge/apps.hpp"

namespace zkb {

/// Deterministic bridge simulation described by a key=value text file;
/// everything not listed keeps its default. Recognized keys:
///   seed, committee, quorum, relays, honest_relays, fullnodes,
///   adversarial_fullnodes, blocks, forks, confirm_depth, batch,
///   rho, queries
/// '#' starts a comment.
struct Scenario {
    std::uint64_t seed = 1;
    std::size_t committee = 4;
    std::size_t quorum = 3;
    std::size_t relays = 4;
    std::size_t honest_relays = 1;
    std::size_t fullnodes = 3;
    std::size_t adversarial_fullnodes = 0;
    std::size_t blocks = 6;
    std::size_t forks = 1;
    std::size_t confirm_depth = 2;
    std::size_t batch = 1;
    std::size_t rho = 8;
    std::size_t queries = 8;

    void validate() const;
    static Scenario parse(const std::string& text);
    std::string to_text() const;
};

Scenario scenario_load(const std::string& path);

struct ScenarioReport {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t forged_submitted = 0;
    std::size_t forged_accepted = 0; // must stay 0
    bool consistency_ok = false;     // main chain prefix of the canonical chain
    bool liveness_ok = false;        // every canonical block retrievable
    std::vector<Digest> final_chain; // truncated main-chain digests
    std::vector<std::uint8_t> updater_snapshot;

    std::string render() const;
};

/// Runs the schedule: the chain produces its blocks (plus fork injections),
/// relays take round-robin height slots, adversarial relays submit forged
/// envelopes (junk bytes, spliced headers, swapped identities), and an
/// honest relay sweeps whatever is still missing so every canonical block
/// eventually lands in the DAG.
ScenarioReport run_scenario(const Scenario& sc);

} // namespace zkb
