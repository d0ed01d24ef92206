#include "zkb/bridge/relay.hpp"

#include <map>

#include "zkb/lightcc.hpp"

namespace zkb {

namespace {

struct PollOutcome {
    RelayStatus status = RelayStatus::Behind;
    HeaderView view;
};

/// Strict-majority answer of the polled nodes for one height.
PollOutcome poll_nodes(std::span<const FullNode> nodes, std::uint64_t height) {
    std::map<Digest, std::pair<std::size_t, HeaderView>> votes;
    std::size_t answered = 0;
    for (const FullNode& n : nodes) {
        auto v = n.next_header(height);
        if (!v) continue;
        ++answered;
        auto [it, fresh] = votes.try_emplace(v->header.digest(), 0, *v);
        ++it->second.first;
    }
    PollOutcome out;
    if (answered == 0) return out; // everyone behind
    out.status = RelayStatus::NoQuorum;
    for (auto& [d, entry] : votes) {
        if (entry.first * 2 > nodes.size()) {
            out.status = RelayStatus::Ok;
            out.view = std::move(entry.second);
            break;
        }
    }
    return out;
}

} // namespace

std::optional<HeaderView> FullNode::next_header(std::uint64_t height) const {
    if (height == 0 || height > chain_->tip_height()) return std::nullopt;
    HeaderView v = chain_->view(height);
    if (adversarial_) v.header.tx_root.digest[0] ^= 0xff; // forged payload commitment
    return v;
}

RelayEnvelope relay_prove_headers(const Relay& relay, std::span<const HeaderView> views,
                                  const Digest& parent) {
    if (views.empty()) throw std::invalid_argument("relay: empty header run");
    std::size_t per = header_copies(relay.committee_size);
    auto circuit = header_statement_circuit(views.size(), relay.committee_size);

    std::vector<Fp> input;
    input.reserve(views.size() * per * 8);
    for (const HeaderView& v : views) {
        if (v.header.signatures.empty()) throw std::invalid_argument("relay: unsigned header");
        Fp msg = digest_to_field(v.header.digest());
        for (std::size_t j = 0; j < per; ++j) {
            std::size_t k = j < v.header.signatures.size() ? j : 0;
            auto [idx, sig] = v.header.signatures[k];
            // refuse to prove an unprovable statement (e.g. a forged header
            // that won the full-node vote): the signatures no longer match
            if (!lc_sig_valid(v.committee.at(idx), sig, v.signer_secrets.at(k), msg))
                throw std::invalid_argument("relay: header signatures do not verify");
            auto copy = lc_copy_input(msg, v.committee.at(idx), sig, v.signer_secrets.at(k));
            input.insert(input.end(), copy.begin(), copy.end());
        }
    }

    Transcript tr(HEADER_PROOF_LABEL, relay.identity);
    DeVirgoProof proof = virgo_prove(circuit, input, relay.params, tr);

    RelayEnvelope env;
    for (const HeaderView& v : views) {
        env.headers.push_back(v.header);
        env.committees.push_back(v.committee);
    }
    env.parent = parent;
    env.proof = proof.serialize();
    env.identity = relay.identity;
    return env;
}

RelayResult relay_next_header(const Relay& relay, std::span<const FullNode> nodes,
                              std::uint64_t height, const Digest& parent) {
    RelayResult res;
    PollOutcome poll = poll_nodes(nodes, height);
    res.status = poll.status;
    if (poll.status != RelayStatus::Ok) return res;
    try {
        res.envelope = relay_prove_headers(relay, {&poll.view, 1}, parent);
    } catch (const std::exception&) {
        res.status = RelayStatus::ProverFailure;
    }
    return res;
}

bool batch_prove_and_update(const Relay& relay, std::span<const FullNode> nodes, Updater& updater,
                            std::size_t batch) {
    std::uint64_t tip = updater.lcs().height;
    Digest parent = updater.lcs().latest;
    std::vector<HeaderView> views;
    Digest link = parent;
    for (std::size_t i = 0; i < batch; ++i) {
        PollOutcome poll = poll_nodes(nodes, tip + 1 + i);
        if (poll.status != RelayStatus::Ok) return false;
        if (poll.view.header.parent != link) return false; // broken run, refuse to prove
        link = poll.view.header.digest();
        views.push_back(std::move(poll.view));
    }
    try {
        return updater.header_update(relay_prove_headers(relay, views, parent));
    } catch (const std::exception&) {
        return false;
    }
}

} // namespace zkb
