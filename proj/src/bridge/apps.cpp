#include "zkb/bridge/apps.hpp"

#include <sstream>

namespace zkb {

namespace {

struct LockTx {
    std::string user;
    std::uint64_t amount = 0;
};

bool parse_lock_tx(std::span<const std::uint8_t> tx, LockTx& out) {
    std::istringstream in(std::string(tx.begin(), tx.end()));
    std::string verb;
    std::uint64_t nonce;
    if (!(in >> verb >> out.user >> out.amount >> nonce) || verb != "lock") return false;
    std::string rest;
    return !(in >> rest);
}

} // namespace

std::vector<std::uint8_t> make_lock_tx(const std::string& user, std::uint64_t amount,
                                       std::uint64_t nonce) {
    std::string s = "lock " + user + " " + std::to_string(amount) + " " + std::to_string(nonce);
    return {s.begin(), s.end()};
}

MintReceipt TokenBridge::mint(std::uint64_t height, std::span<const std::uint8_t> tx,
                              const MerklePath& path) {
    MintReceipt rc;
    LockTx lock;
    if (!parse_lock_tx(tx, lock)) {
        rc.reason = "malformed lock tx";
        return rc;
    }
    rc.user = lock.user;
    rc.amount = lock.amount;
    if (!updater_->verify_tx_inclusion(height, tx, path)) {
        rc.reason = "inclusion proof rejected";
        return rc;
    }
    Digest id = sha256(tx);
    if (minted_.count(id)) {
        rc.reason = "already minted";
        return rc;
    }
    minted_.insert(id);
    ledger_[lock.user] += lock.amount;
    rc.ok = true;
    return rc;
}

std::uint64_t TokenBridge::balance(const std::string& user) const {
    auto it = ledger_.find(user);
    return it == ledger_.end() ? 0 : it->second;
}

LockMintOutcome lock_mint_demo(std::uint64_t seed, std::uint64_t amount) {
    LockMintOutcome out;

    ChainSim chain(ChainParams{4, 3, seed});
    UpdaterParams up;
    up.proof = DeVirgoParams{8, 8};
    Updater updater(chain.genesis(), up);
    TokenBridge bridge(&updater);
    Relay relay{{'d', 'e', 'm', 'o'}, up.committee_size, up.proof};
    std::vector<FullNode> nodes(3, FullNode(&chain));

    auto lock_tx = make_lock_tx("alice", amount, seed);
    chain.produce_block({lock_tx, {'x'}});
    std::uint64_t lock_height = chain.tip_height();
    MerklePath path = chain.tx_path(lock_height, 0);

    // mint before any relay: the header is unknown to the updater
    out.premature_rejected = !bridge.mint(lock_height, lock_tx, path).ok;

    // confirmation blocks, then relay everything
    for (std::size_t i = 0; i < up.confirm_depth; ++i) chain.produce_block({{'c'}});
    while (updater.lcs().height < chain.tip_height())
        if (!batch_prove_and_update(relay, nodes, updater, 1)) break;

    MintReceipt rc = bridge.mint(lock_height, lock_tx, path);
    if (rc.ok) out.credited = bridge.balance(rc.user);
    out.replay_rejected = !bridge.mint(lock_height, lock_tx, path).ok;
    out.updater_snapshot = updater.snapshot();
    return out;
}

} // namespace zkb
