#include "zkb/bridge/scenario.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "zkb/util.hpp"

namespace zkb {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::uint8_t> relay_identity(std::size_t slot) {
    std::string s = "relay-" + std::to_string(slot);
    return {s.begin(), s.end()};
}

} // namespace

void Scenario::validate() const {
    if (quorum == 0 || quorum > committee) throw std::invalid_argument("scenario: quorum out of range");
    if (relays == 0 || honest_relays == 0 || honest_relays > relays)
        throw std::invalid_argument("scenario: need at least one honest relay");
    if (fullnodes == 0 || adversarial_fullnodes * 2 >= fullnodes)
        throw std::invalid_argument("scenario: honest full nodes must hold a majority");
    if (blocks == 0) throw std::invalid_argument("scenario: need at least one block");
    if (!is_power_of_two(batch)) throw std::invalid_argument("scenario: batch must be a power of two");
    if (batch > 1 && blocks % batch != 0)
        throw std::invalid_argument("scenario: blocks must divide into batches");
    if (rho < 2 || !is_power_of_two(rho)) throw std::invalid_argument("scenario: bad rate parameter");
    if (queries == 0) throw std::invalid_argument("scenario: need at least one query");
}

Scenario Scenario::parse(const std::string& text) {
    Scenario sc;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        std::uint64_t v;
        try {
            std::size_t used;
            v = std::stoull(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                        ": bad value '" + value + "'");
        }
        if (key == "seed") sc.seed = v;
        else if (key == "committee") sc.committee = v;
        else if (key == "quorum") sc.quorum = v;
        else if (key == "relays") sc.relays = v;
        else if (key == "honest_relays") sc.honest_relays = v;
        else if (key == "fullnodes") sc.fullnodes = v;
        else if (key == "adversarial_fullnodes") sc.adversarial_fullnodes = v;
        else if (key == "blocks") sc.blocks = v;
        else if (key == "forks") sc.forks = v;
        else if (key == "confirm_depth") sc.confirm_depth = v;
        else if (key == "batch") sc.batch = v;
        else if (key == "rho") sc.rho = v;
        else if (key == "queries") sc.queries = v;
        else
            throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
    }
    sc.validate();
    return sc;
}

std::string Scenario::to_text() const {
    std::ostringstream out;
    out << "seed = " << seed << "\n"
        << "committee = " << committee << "\n"
        << "quorum = " << quorum << "\n"
        << "relays = " << relays << "\n"
        << "honest_relays = " << honest_relays << "\n"
        << "fullnodes = " << fullnodes << "\n"
        << "adversarial_fullnodes = " << adversarial_fullnodes << "\n"
        << "blocks = " << blocks << "\n"
        << "forks = " << forks << "\n"
        << "confirm_depth = " << confirm_depth << "\n"
        << "batch = " << batch << "\n"
        << "rho = " << rho << "\n"
        << "queries = " << queries << "\n";
    return out.str();
}

Scenario scenario_load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("scenario: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return Scenario::parse(buf.str());
}

std::string ScenarioReport::render() const {
    std::ostringstream out;
    out << "accepted envelopes:  " << accepted << "\n"
        << "rejected envelopes:  " << rejected << "\n"
        << "forged submitted:    " << forged_submitted << "\n"
        << "forged accepted:     " << forged_accepted << "\n"
        << "consistency:         " << (consistency_ok ? "ok" : "VIOLATED") << "\n"
        << "liveness:            " << (liveness_ok ? "ok" : "VIOLATED") << "\n"
        << "main chain (" << final_chain.size() << " headers):\n";
    for (const Digest& d : final_chain) out << "  " << hex(d) << "\n";
    return out.str();
}

ScenarioReport run_scenario(const Scenario& sc) {
    sc.validate();
    std::mt19937_64 rng(sc.seed);
    ScenarioReport rep;

    ChainSim chain(ChainParams{sc.committee, sc.quorum, sc.seed});
    for (std::size_t b = 0; b < sc.blocks; ++b) {
        std::vector<std::vector<std::uint8_t>> txs(1 + rng() % 3);
        for (auto& tx : txs) {
            tx.resize(8);
            std::uint64_t v = rng();
            for (int i = 0; i < 8; ++i) tx[i] = static_cast<std::uint8_t>(v >> (8 * i));
        }
        chain.produce_block(std::move(txs));
    }
    for (std::size_t f = 0; f < sc.forks; ++f)
        chain.produce_fork_block(rng() % sc.blocks, {});

    UpdaterParams up;
    up.committee_size = sc.committee;
    up.quorum = sc.quorum;
    up.confirm_depth = sc.confirm_depth;
    up.proof = DeVirgoParams{sc.rho, sc.queries};
    Updater updater(chain.genesis(), up);

    std::vector<FullNode> nodes;
    for (std::size_t i = 0; i < sc.fullnodes; ++i)
        nodes.push_back(FullNode(&chain, i < sc.adversarial_fullnodes));

    auto submit = [&](const RelayEnvelope& env, bool forged) {
        bool ok = updater.header_update(env);
        ++(ok ? rep.accepted : rep.rejected);
        if (forged) {
            ++rep.forged_submitted;
            if (ok) ++rep.forged_accepted;
        }
    };

    if (sc.batch > 1) {
        Relay honest{relay_identity(0), sc.committee, up.proof};
        while (updater.lcs().height < sc.blocks)
            if (!batch_prove_and_update(honest, nodes, updater, sc.batch)) break;
        rep.accepted = updater.accepted_count();
        rep.rejected = updater.rejected_count();
    } else {
        // round-robin height slots; adversarial slots submit forgeries
        for (std::uint64_t h = 1; h <= sc.blocks; ++h) {
            std::size_t slot = (h - 1) % sc.relays;
            Relay relay{relay_identity(slot), sc.committee, up.proof};
            Digest parent = chain.header(h - 1).digest();
            if (slot < sc.honest_relays) {
                RelayResult res = relay_next_header(relay, nodes, h, parent);
                if (res.status == RelayStatus::Ok) submit(res.envelope, false);
            } else {
                RelayResult res = relay_next_header(relay, nodes, h, parent);
                if (res.status != RelayStatus::Ok) continue;
                RelayEnvelope env = res.envelope;
                switch (rng() % 4) {
                    case 0: { // junk proof bytes
                        env.proof.resize(64);
                        for (auto& b : env.proof) b = static_cast<std::uint8_t>(rng());
                        break;
                    }
                    case 1: // valid proof spliced onto a tampered header
                        env.headers[0].tx_root.digest[3] ^= 0x01;
                        break;
                    case 2: // stolen envelope under another identity
                        env.identity = {'e', 'v', 'i', 'l'};
                        break;
                    default: // committee key substitution
                        env.committees[0][0] += Fp::one();
                        break;
                }
                submit(env, true);
            }
        }
    }

    // an honest relay sweeps everything still missing, in height order
    Relay sweeper{relay_identity(0), sc.committee, up.proof};
    for (std::uint64_t h = 1; h <= sc.blocks; ++h) {
        if (updater.dag().contains(chain.header(h).digest())) continue;
        RelayResult res = relay_next_header(sweeper, nodes, h, chain.header(h - 1).digest());
        if (res.status == RelayStatus::Ok) submit(res.envelope, false);
    }

    // relay the injected forks too: valid headers on losing branches
    for (const HeaderView& v : chain.fork_views()) {
        RelayEnvelope env = relay_prove_headers(sweeper, {&v, 1}, v.header.parent);
        submit(env, false);
    }

    // consistency: truncated main chain is a prefix of the canonical chain
    auto mc = main_chain(updater.dag(), sc.confirm_depth);
    rep.consistency_ok = mc.size() <= sc.blocks + 1;
    for (std::size_t i = 0; i < mc.size() && rep.consistency_ok; ++i)
        rep.consistency_ok = mc[i].digest() == chain.header(i).digest();
    for (const auto& h : mc) rep.final_chain.push_back(h.digest());

    // liveness: every canonical block retrievable from the updater
    rep.liveness_ok = true;
    for (std::uint64_t h = 0; h <= sc.blocks && rep.liveness_ok; ++h)
        rep.liveness_ok = updater.dag().contains(chain.header(h).digest()) &&
                          updater.get_header(h).has_value();

    rep.updater_snapshot = updater.snapshot();
    return rep;
}

} // namespace zkb
