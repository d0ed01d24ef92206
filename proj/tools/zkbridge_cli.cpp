// zkbridge command-line front end: proving, verifying, cluster roles,
// scaling benchmarks and bridge scenario runs.

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "zkb/bridge/scenario.hpp"
#include "zkb/devirgo.hpp"
#include "zkb/lightcc.hpp"
#include "zkb/util.hpp"

using namespace zkb;
using nlohmann::json;

namespace {

constexpr int EXIT_OK = 0;
constexpr int EXIT_FAILURE_PROTO = 1;
constexpr int EXIT_USAGE = 2;

struct CliError : std::runtime_error {
    int code;
    CliError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
};

struct Config {
    std::size_t rho = 8;
    std::size_t queries = 16;
    std::size_t copies = 1;
    std::size_t workers = 1;
    std::vector<std::string> endpoints;
    std::string identity = "cli";
    std::uint64_t seed = 1;

    DeVirgoParams proof() const { return DeVirgoParams{rho, queries}; }
    std::vector<std::uint8_t> identity_bytes() const { return {identity.begin(), identity.end()}; }

    ClusterConfig cluster() const {
        ClusterConfig c;
        c.workers = endpoints.empty() ? workers : endpoints.size();
        c.copies = copies;
        c.endpoints = endpoints;
        c.identity = identity_bytes();
        return c;
    }
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

void load_config_file(Config& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError(EXIT_USAGE, "cannot open config " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw CliError(EXIT_USAGE, "config: expected key = value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key == "rho") cfg.rho = std::stoull(value);
        else if (key == "queries") cfg.queries = std::stoull(value);
        else if (key == "copies") cfg.copies = std::stoull(value);
        else if (key == "workers") cfg.workers = std::stoull(value);
        else if (key == "identity") cfg.identity = value;
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "endpoints") {
            cfg.endpoints.clear();
            std::istringstream es(value);
            std::string ep;
            while (std::getline(es, ep, ',')) cfg.endpoints.push_back(trim(ep));
        } else
            throw CliError(EXIT_USAGE, "config: unknown key '" + key + "'");
    }
}

void require_file(const std::string& path) {
    if (!std::ifstream(path)) throw CliError(EXIT_USAGE, "cannot open " + path);
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError(EXIT_USAGE, "cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError(EXIT_FAILURE_PROTO, "cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

struct ProveOutcome {
    DeVirgoProof proof;
    std::vector<WorkerStats> stats;
    std::size_t frames_sent = 0, frames_received = 0;
    double wall_ms = 0;
};

/// Runs the distributed prover on in-process worker threads.
ProveOutcome prove_in_process(const Config& cfg, const DataParallelCircuit& c,
                              std::span<const Fp> input) {
    std::vector<std::unique_ptr<Channel>> coord_side, worker_side;
    for (std::size_t j = 0; j < cfg.workers; ++j) {
        auto [a, b] = make_local_pair();
        coord_side.push_back(std::move(a));
        worker_side.push_back(std::move(b));
    }
    std::vector<std::thread> threads;
    for (std::size_t j = 0; j < cfg.workers; ++j)
        threads.emplace_back([&, j] { devirgo_worker(*worker_side[j]); });
    std::vector<Channel*> chans;
    for (auto& ch : coord_side) chans.push_back(ch.get());

    ProveOutcome out;
    auto t0 = std::chrono::steady_clock::now();
    Transcript tr("zkb.cli.prove", cfg.identity_bytes());
    out.proof = devirgo_prove(chans, c, input, cfg.proof(), tr, &out.stats);
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    for (auto& t : threads) t.join();
    for (auto& ch : coord_side) {
        out.frames_sent += ch->frames_sent();
        out.frames_received += ch->frames_received();
    }
    return out;
}

/// Runs the distributed prover against TCP workers.
ProveOutcome prove_over_tcp(const Config& cfg, const DataParallelCircuit& c,
                            std::span<const Fp> input) {
    ClusterConfig cluster = cfg.cluster();
    cluster.validate();
    Digest cfg_hash = cluster.config_hash();
    std::vector<std::unique_ptr<Channel>> chans;
    for (const auto& ep : cfg.endpoints) {
        auto [host, port] = split_host_port(ep);
        auto ch = tcp_connect(host, port);
        handshake_send(*ch, cfg_hash);
        handshake_check(*ch, cfg_hash);
        chans.push_back(std::move(ch));
    }
    std::vector<Channel*> raw;
    for (auto& ch : chans) raw.push_back(ch.get());

    ProveOutcome out;
    auto t0 = std::chrono::steady_clock::now();
    Transcript tr("zkb.cli.prove", cfg.identity_bytes());
    out.proof = devirgo_prove(raw, c, input, cfg.proof(), tr, &out.stats);
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    for (auto& ch : chans) {
        out.frames_sent += ch->frames_sent();
        out.frames_received += ch->frames_received();
    }
    return out;
}

int cmd_prove(const Config& cfg, const std::string& circuit_path, const std::string& witness_path,
              const std::string& out_path) {
    require_file(circuit_path);
    require_file(witness_path);
    LayeredCircuit sub = circuit_load(circuit_path);
    DataParallelCircuit c{sub, cfg.copies};
    std::vector<Fp> input = fp_vector_load(witness_path);
    if (input.size() != c.input_size())
        throw CliError(EXIT_USAGE, "witness has " + std::to_string(input.size()) +
                                       " elements, circuit expects " +
                                       std::to_string(c.input_size()));

    ProveOutcome out = cfg.endpoints.empty() ? prove_in_process(cfg, c, input)
                                             : prove_over_tcp(cfg, c, input);
    auto bytes = out.proof.serialize();
    write_file(out_path, bytes);

    json stats;
    stats["proof_bytes"] = bytes.size();
    stats["wall_ms"] = out.wall_ms;
    stats["workers"] = out.stats.size();
    stats["frames_sent"] = out.frames_sent;
    stats["frames_received"] = out.frames_received;
    stats["per_worker_gates"] = json::array();
    for (const auto& s : out.stats) stats["per_worker_gates"].push_back(s.gates_evaluated);
    std::ofstream(out_path + ".json") << stats.dump(2) << "\n";

    std::cout << "proof written to " << out_path << " (" << bytes.size() << " bytes, "
              << out.stats.size() << " workers, " << out.wall_ms << " ms)\n";
    return EXIT_OK;
}

int cmd_verify(const Config& cfg, const std::string& circuit_path, const std::string& proof_path,
               const std::string& output_path, const std::string& public_path) {
    require_file(circuit_path);
    require_file(proof_path);
    require_file(output_path);
    LayeredCircuit sub = circuit_load(circuit_path);
    DataParallelCircuit c{sub, cfg.copies};
    std::vector<Fp> claimed = fp_vector_load(output_path);
    std::vector<Fp> publics;
    if (!public_path.empty()) publics = fp_vector_load(public_path);

    auto bytes = read_file(proof_path);
    DeVirgoProof proof;
    try {
        proof = DeVirgoProof::deserialize(bytes);
    } catch (const std::exception& e) {
        std::cout << "reject: malformed proof (" << e.what() << ")\n";
        return EXIT_FAILURE_PROTO;
    }
    Transcript tr("zkb.cli.prove", cfg.identity_bytes());
    bool ok = devirgo_verify(c, claimed, publics, proof, cfg.proof(), tr);
    std::cout << (ok ? "accept" : "reject") << "\n";
    return ok ? EXIT_OK : EXIT_FAILURE_PROTO;
}

int cmd_worker(const Config& cfg, const std::string& listen, bool once) {
    auto [host, port] = split_host_port(listen.find(':') == std::string::npos
                                            ? "127.0.0.1:" + listen
                                            : listen);
    (void)host; // the listener binds loopback
    TcpListener listener(port);
    std::cout << "worker listening on 127.0.0.1:" << listener.port() << "\n";
    do {
        auto ch = listener.accept();
        // echo the coordinator's hello after checking the version
        Frame hello = ch->receive();
        if (hello.tag != TAG_HELLO) {
            std::cerr << "worker: bad handshake\n";
            continue;
        }
        ByteReader r(hello.payload);
        if (r.u32() != PROTOCOL_VERSION) {
            std::cerr << "worker: protocol version mismatch\n";
            continue;
        }
        handshake_send(*ch, r.digest());
        try {
            WorkerStats stats = devirgo_worker(*ch);
            std::cout << "session done, " << stats.gates_evaluated << " gates\n";
        } catch (const std::exception& e) {
            std::cerr << "worker session failed: " << e.what() << "\n";
        }
    } while (!once);
    return EXIT_OK;
}

/// One scaling row: a light-client circuit with `copies` signature copies,
/// honest witness, proved with `workers` in-process workers.
int cmd_bench(Config cfg, std::vector<std::size_t> copies_list,
              std::vector<std::size_t> workers_list, const std::string& csv_path) {
    if (copies_list.empty() || workers_list.empty())
        throw CliError(EXIT_USAGE, "bench-scaling needs --copies and --workers lists");

    std::ostringstream csv;
    csv << "copies,workers,wall_ms,per_worker_gates\n";
    std::cout << "copies  workers  wall_ms    gates/worker\n";
    std::mt19937_64 rng(cfg.seed);
    for (std::size_t copies : copies_list) {
        auto c = build_light_client_circuit(copies);
        std::vector<Fp> input;
        for (std::size_t i = 0; i < copies; ++i) {
            Fp sk = Fp(rng() % Fp::MOD), msg = Fp(rng() % Fp::MOD);
            auto copy = lc_copy_input(msg, lc_keygen(sk), lc_sign(sk, msg), sk);
            input.insert(input.end(), copy.begin(), copy.end());
        }
        for (std::size_t workers : workers_list) {
            if (workers > copies) continue;
            cfg.copies = copies;
            cfg.workers = workers;
            ProveOutcome out = prove_in_process(cfg, c, input);
            std::uint64_t per_worker = out.stats.empty() ? 0 : out.stats[0].gates_evaluated;
            std::cout << copies << "\t" << workers << "\t" << out.wall_ms << "\t" << per_worker
                      << "\n";
            csv << copies << "," << workers << "," << out.wall_ms << "," << per_worker << "\n";
        }
    }
    if (!csv_path.empty()) {
        std::ofstream(csv_path) << csv.str();
        std::cout << "csv written to " << csv_path << "\n";
    }
    return EXIT_OK;
}

int cmd_scenario(const std::string& path, const std::string& out_path) {
    Scenario sc;
    try {
        sc = scenario_load(path);
    } catch (const std::exception& e) {
        std::cerr << "scenario: " << e.what() << "\n";
        return EXIT_USAGE;
    }
    ScenarioReport rep = run_scenario(sc);
    std::cout << rep.render();
    if (!out_path.empty()) write_file(out_path, rep.updater_snapshot);
    return (rep.consistency_ok && rep.liveness_ok && rep.forged_accepted == 0)
               ? EXIT_OK
               : EXIT_FAILURE_PROTO;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zkbridge: distributed succinct proofs and a simulated cross-chain bridge"};
    app.require_subcommand(1);

    Config cfg;
    std::string config_path;
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--rho", cfg.rho, "commitment rate parameter");
    app.add_option("--queries", cfg.queries, "spot-check count");
    app.add_option("--copies", cfg.copies, "data-parallel copy count");
    app.add_option("--seed", cfg.seed, "deterministic seed");
    app.add_option("--identity", cfg.identity, "prover identity string");

    auto* prove = app.add_subcommand("prove", "prove a data-parallel circuit");
    std::string circuit_path, witness_path, out_path = "proof.bin";
    std::string endpoints_csv;
    prove->add_option("circuit", circuit_path, "circuit text file")->required();
    prove->add_option("witness", witness_path, "witness element file")->required();
    prove->add_option("--out", out_path, "proof output path");
    prove->add_option("--workers", cfg.workers, "in-process worker count");
    prove->add_option("--endpoints", endpoints_csv, "comma-separated worker host:port list");

    auto* coordinate = app.add_subcommand("coordinate", "prove against TCP workers");
    std::string coord_workers;
    coordinate->add_option("circuit", circuit_path, "circuit text file")->required();
    coordinate->add_option("witness", witness_path, "witness element file")->required();
    coordinate->add_option("--workers", coord_workers, "comma-separated worker host:port list")
        ->required();
    coordinate->add_option("--out", out_path, "proof output path");

    auto* verify = app.add_subcommand("verify", "verify a proof");
    std::string proof_path, output_path, public_path;
    verify->add_option("circuit", circuit_path, "circuit text file")->required();
    verify->add_option("proof", proof_path, "proof file")->required();
    verify->add_option("--output", output_path, "claimed output element file")->required();
    verify->add_option("--public", public_path, "public input element file");

    auto* worker = app.add_subcommand("worker", "serve proof sessions over TCP");
    std::string listen = "127.0.0.1:0";
    bool once = false;
    worker->add_option("--listen", listen, "host:port (port 0 = ephemeral)");
    worker->add_flag("--once", once, "exit after one session");

    auto* bench = app.add_subcommand("bench-scaling", "prover scaling table");
    std::vector<std::size_t> copies_list, workers_list;
    std::string csv_path;
    bench->add_option("--copies", copies_list, "copy counts")->delimiter(',');
    bench->add_option("--workers", workers_list, "worker counts")->delimiter(',');
    bench->add_option("--csv", csv_path, "CSV output path");

    auto* scenario = app.add_subcommand("scenario", "run a bridge scenario file");
    std::string scenario_path, snapshot_out;
    scenario->add_option("file", scenario_path, "scenario file")->required();
    scenario->add_option("--out", snapshot_out, "write the final updater snapshot here");

    // let global options (--copies, --rho, ...) appear after the subcommand
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? EXIT_OK : EXIT_USAGE;
    }

    try {
        if (!config_path.empty()) load_config_file(cfg, config_path);
        if (!endpoints_csv.empty()) {
            std::istringstream es(endpoints_csv);
            std::string ep;
            while (std::getline(es, ep, ',')) cfg.endpoints.push_back(trim(ep));
        }
        if (prove->parsed()) return cmd_prove(cfg, circuit_path, witness_path, out_path);
        if (coordinate->parsed()) {
            cfg.endpoints.clear();
            std::istringstream es(coord_workers);
            std::string ep;
            while (std::getline(es, ep, ',')) cfg.endpoints.push_back(trim(ep));
            return cmd_prove(cfg, circuit_path, witness_path, out_path);
        }
        if (verify->parsed())
            return cmd_verify(cfg, circuit_path, proof_path, output_path, public_path);
        if (worker->parsed()) return cmd_worker(cfg, listen, once);
        if (bench->parsed()) return cmd_bench(cfg, copies_list, workers_list, csv_path);
        if (scenario->parsed()) return cmd_scenario(scenario_path, snapshot_out);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_FAILURE_PROTO;
    }
    return EXIT_USAGE;
}
