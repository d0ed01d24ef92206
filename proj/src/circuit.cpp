#include "zkb/circuit.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "zkb/mle.hpp"
#include "zkb/util.hpp"

namespace zkb {

void LayeredCircuit::validate() const {
    if (layers.empty()) throw std::invalid_argument("circuit: no layers");
    if (!is_power_of_two(input_size)) throw std::invalid_argument("circuit: input size not a power of two");
    if (public_inputs != 0 && public_inputs != input_size / 2)
        throw std::invalid_argument("circuit: public inputs must be none or half the input layer");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (!is_power_of_two(layers[i].gates.size()))
            throw std::invalid_argument("circuit: layer size not a power of two");
        std::size_t below = fanin_size(i);
        for (const Gate& g : layers[i].gates)
            if (g.left >= below || g.right >= below)
                throw std::invalid_argument("circuit: gate wire out of range");
    }
}

DataParallelCircuit replicate(const LayeredCircuit& sub, std::size_t n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("replicate: copy count not a power of two");
    sub.validate();
    return {sub, n};
}

LayerValues circuit_evaluate(const LayeredCircuit& c, std::span<const Fp> input) {
    if (input.size() != c.input_size) throw std::invalid_argument("evaluate: input size mismatch");
    LayerValues out;
    out.layers.resize(c.depth() + 1);
    out.layers[c.depth()].assign(input.begin(), input.end());
    for (std::size_t i = c.depth(); i-- > 0;) {
        const auto& below = out.layers[i + 1];
        auto& here = out.layers[i];
        here.resize(c.layers[i].gates.size());
        for (std::size_t g = 0; g < here.size(); ++g) {
            const Gate& gate = c.layers[i].gates[g];
            here[g] = gate.eval(below[gate.left], below[gate.right]);
        }
    }
    return out;
}

LayerValues circuit_evaluate(const DataParallelCircuit& c, std::span<const Fp> input) {
    if (input.size() != c.input_size()) throw std::invalid_argument("evaluate: input size mismatch");
    LayerValues out;
    out.layers.resize(c.depth() + 1);
    std::size_t m = c.sub.input_size;
    for (std::size_t copy = 0; copy < c.copies; ++copy) {
        auto part = circuit_evaluate(c.sub, input.subspan(copy * m, m));
        for (std::size_t i = 0; i < part.layers.size(); ++i)
            out.layers[i].insert(out.layers[i].end(), part.layers[i].begin(), part.layers[i].end());
    }
    return out;
}

WiringEval wiring_eval_weighted(const DataParallelCircuit& c, std::size_t layer,
                                std::span<const Fp> z_weights, std::span<const Fp> x,
                                std::span<const Fp> y) {
    if (layer >= c.depth()) throw std::invalid_argument("wiring: bad layer");
    std::size_t sz = c.sub.layers[layer].gates.size();
    std::size_t sb = c.sub.fanin_size(layer);
    unsigned s_below = log2_exact(sb);
    unsigned n = log2_exact(c.copies);
    if (z_weights.size() != sz * c.copies || x.size() != s_below + n || y.size() != s_below + n)
        throw std::invalid_argument("wiring: dimension mismatch");

    auto bx_lo = beta_table(x.subspan(0, s_below));
    auto by_lo = beta_table(y.subspan(0, s_below));
    auto bx_hi = beta_table(x.subspan(s_below));
    auto by_hi = beta_table(y.subspan(s_below));

    WiringEval acc{};
    for (std::size_t copy = 0; copy < c.copies; ++copy) {
        Fp scale = bx_hi[copy] * by_hi[copy];
        WiringEval local{};
        for (std::size_t g = 0; g < sz; ++g) {
            const Gate& gate = c.sub.layers[layer].gates[g];
            Fp w = z_weights[copy * sz + g] * bx_lo[gate.left] * by_lo[gate.right];
            if (gate.kind == Gate::Kind::Mul) {
                local.mult += w;
            } else {
                local.add_a += gate.a * w;
                local.add_b += gate.b * w;
                local.add_c += gate.c * w;
            }
        }
        acc.mult += scale * local.mult;
        acc.add_a += scale * local.add_a;
        acc.add_b += scale * local.add_b;
        acc.add_c += scale * local.add_c;
    }
    return acc;
}

WiringEval wiring_eval(const LayeredCircuit& c, std::size_t layer, std::span<const Fp> z,
                       std::span<const Fp> x, std::span<const Fp> y) {
    DataParallelCircuit dp{c, 1};
    if (layer >= c.depth()) throw std::invalid_argument("wiring: bad layer");
    if (z.size() != log2_exact(c.layers[layer].gates.size()))
        throw std::invalid_argument("wiring: dimension mismatch");
    return wiring_eval_weighted(dp, layer, beta_table(z), x, y);
}

std::pair<Fp, Fp> wiring_mle(const LayeredCircuit& c, std::size_t layer, std::span<const Fp> z,
                             std::span<const Fp> x, std::span<const Fp> y) {
    WiringEval e = wiring_eval(c, layer, z, x, y);
    return {e.add_a, e.mult};
}

// ---- text format ------------------------------------------------------

namespace {

std::uint64_t parse_u64(const std::string& tok, const char* what) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        throw std::invalid_argument(std::string("circuit parse: bad ") + what + " '" + tok + "'");
    return v;
}

Fp parse_fp(const std::string& tok, const char* what) {
    std::uint64_t v = parse_u64(tok, what);
    if (v >= Fp::MOD) throw std::invalid_argument("circuit parse: non-canonical constant");
    return Fp::from_raw_unchecked(v);
}

} // namespace

LayeredCircuit circuit_from_text(const std::string& text) {
    LayeredCircuit c;
    bool have_header = false;
    Layer* current = nullptr;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string op;
        if (!(ls >> op)) continue;
        std::vector<std::string> args;
        for (std::string t; ls >> t;) args.push_back(t);

        if (op == "circuit") {
            if (have_header || args.size() != 2) throw std::invalid_argument("circuit parse: bad header");
            c.input_size = parse_u64(args[0], "input size");
            c.public_inputs = parse_u64(args[1], "public count");
            have_header = true;
        } else if (op == "layer") {
            if (!have_header || args.size() != 1) throw std::invalid_argument("circuit parse: bad layer line");
            std::size_t sz = parse_u64(args[0], "layer size");
            c.layers.push_back(Layer{std::vector<Gate>(sz)});
            current = &c.layers.back();
        } else if (op == "add" || op == "mul" || op == "lin") {
            if (!current) throw std::invalid_argument("circuit parse: gate before layer");
            std::size_t need = op == "lin" ? 6 : 3;
            if (args.size() != need) throw std::invalid_argument("circuit parse: bad gate arity");
            std::size_t o = parse_u64(args[0], "output wire");
            auto l = static_cast<std::uint32_t>(parse_u64(args[1], "left wire"));
            auto r = static_cast<std::uint32_t>(parse_u64(args[2], "right wire"));
            if (o >= current->gates.size()) throw std::invalid_argument("circuit parse: output wire out of range");
            if (op == "add")
                current->gates[o] = Gate::add(l, r);
            else if (op == "mul")
                current->gates[o] = Gate::mul(l, r);
            else
                current->gates[o] = Gate::lin(l, r, parse_fp(args[3], "coefficient"),
                                              parse_fp(args[4], "coefficient"),
                                              parse_fp(args[5], "coefficient"));
        } else {
            throw std::invalid_argument("circuit parse: unknown directive '" + op + "'");
        }
    }
    if (!have_header) throw std::invalid_argument("circuit parse: missing header");
    c.validate();
    return c;
}

std::string circuit_to_text(const LayeredCircuit& c) {
    std::ostringstream out;
    out << "circuit " << c.input_size << ' ' << c.public_inputs << '\n';
    for (const Layer& layer : c.layers) {
        out << "layer " << layer.gates.size() << '\n';
        for (std::size_t o = 0; o < layer.gates.size(); ++o) {
            const Gate& g = layer.gates[o];
            if (g == Gate::dummy()) continue;
            if (g.kind == Gate::Kind::Mul)
                out << "mul " << o << ' ' << g.left << ' ' << g.right << '\n';
            else if (g.a == Fp::one() && g.b == Fp::one() && g.c.is_zero())
                out << "add " << o << ' ' << g.left << ' ' << g.right << '\n';
            else
                out << "lin " << o << ' ' << g.left << ' ' << g.right << ' ' << g.a.value() << ' '
                    << g.b.value() << ' ' << g.c.value() << '\n';
        }
    }
    return out.str();
}

LayeredCircuit circuit_load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open circuit file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return circuit_from_text(buf.str());
}

void circuit_save(const LayeredCircuit& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write circuit file: " + path);
    out << circuit_to_text(c);
}

std::vector<Fp> fp_vector_load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open witness file: " + path);
    std::uint8_t hdr[8];
    if (!in.read(reinterpret_cast<char*>(hdr), 8))
        throw std::invalid_argument("witness file: truncated header");
    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i) n |= std::uint64_t{hdr[i]} << (8 * i);
    std::vector<Fp> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint8_t buf[8];
        if (!in.read(reinterpret_cast<char*>(buf), 8))
            throw std::invalid_argument("witness file: truncated element");
        out.push_back(fp_deserialize(buf));
    }
    return out;
}

void fp_vector_save(std::span<const Fp> values, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write witness file: " + path);
    std::vector<std::uint8_t> buf;
    std::uint64_t n = values.size();
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
    for (Fp v : values) fp_serialize(v, buf);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

} // namespace zkb
