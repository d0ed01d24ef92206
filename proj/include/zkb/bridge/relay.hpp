#pragma once

#include "zkb/bridge/updater.hpp"

namespace zkb {

/// A relay's view of one simulated full node. Adversarial nodes serve a
/// validly shaped but forged header (tampered tx root), which majority
/// polling must filter out.
class FullNode {
public:
    explicit FullNode(const ChainSim* chain, bool adversarial = false)
        : chain_(chain), adversarial_(adversarial) {}

    bool adversarial() const { return adversarial_; }

    /// The node's answer for the canonical header at `height`, or nullopt
    /// when the node is still behind that height.
    std::optional<HeaderView> next_header(std::uint64_t height) const;

private:
    const ChainSim* chain_;
    bool adversarial_;
};

enum class RelayStatus { Ok, Behind, NoQuorum, ProverFailure };

struct RelayResult {
    RelayStatus status = RelayStatus::ProverFailure;
    RelayEnvelope envelope;
};

struct Relay {
    std::vector<std::uint8_t> identity;
    std::size_t committee_size = 4;
    DeVirgoParams params{8, 16};
};

/// Proves a parent-linked run of headers into one envelope (Protocol 1's
/// submission, generalized to batches).
RelayEnvelope relay_prove_headers(const Relay& relay, std::span<const HeaderView> views,
                                  const Digest& parent);

/// Contacts the given full nodes for the header at `height`, takes the
/// strict-majority answer, and proves it. Behind if every node is behind;
/// NoQuorum if no header digest reaches a majority.
RelayResult relay_next_header(const Relay& relay, std::span<const FullNode> nodes,
                              std::uint64_t height, const Digest& parent);

/// Pulls the next `batch` headers past the updater's accepted tip from the
/// full nodes (majority-polled per height), proves them in one envelope,
/// and applies it to the updater.
bool batch_prove_and_update(const Relay& relay, std::span<const FullNode> nodes, Updater& updater,
                            std::size_t batch);

} // namespace zkb
