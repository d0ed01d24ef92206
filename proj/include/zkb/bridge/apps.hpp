#pragma once

#include <map>
#include <set>
#include <string>

#include "zkb/bridge/relay.hpp"

namespace zkb {

/// Lock transaction payload: "lock <user> <amount> <nonce>".
std::vector<std::uint8_t> make_lock_tx(const std::string& user, std::uint64_t amount,
                                       std::uint64_t nonce);

struct MintReceipt {
    bool ok = false;
    std::string user;
    std::uint64_t amount = 0;
    std::string reason; // on rejection
};

/// Mint side of the one-directional token bridge: accepts a lock tx plus an
/// inclusion path against the tracking updater, credits the user once, and
/// marks the tx so replays are rejected.
class TokenBridge {
public:
    explicit TokenBridge(const Updater* updater) : updater_(updater) {}

    MintReceipt mint(std::uint64_t height, std::span<const std::uint8_t> tx,
                     const MerklePath& path);

    std::uint64_t balance(const std::string& user) const;
    std::size_t minted_count() const { return minted_.size(); }

private:
    const Updater* updater_;
    std::set<Digest> minted_;
    std::map<std::string, std::uint64_t> ledger_;
};

/// End-to-end demo: a lock tx on the sender chain is relayed and minted on
/// the destination side, with premature-mint and replay attempts rejected
/// along the way.
struct LockMintOutcome {
    std::uint64_t credited = 0;
    bool premature_rejected = false;
    bool replay_rejected = false;
    std::vector<std::uint8_t> updater_snapshot; // for cross-run determinism checks
};

LockMintOutcome lock_mint_demo(std::uint64_t seed, std::uint64_t amount);

} // namespace zkb
