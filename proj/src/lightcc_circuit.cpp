#include "zkb/lightcc.hpp"

#include <array>

#include "zkb/util.hpp"

namespace zkb {

namespace {

std::array<Fp, MIMC_ROUNDS> make_round_constants() {
    std::array<Fp, MIMC_ROUNDS> k;
    for (std::size_t j = 0; j < MIMC_ROUNDS; ++j) {
        Hasher h;
        h.update(bytes_of(std::string("zkb.mimc")));
        h.update_u64le(j);
        Digest d = h.finalize();
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{d[i]} << (8 * i);
        k[j] = Fp::from_raw_unchecked(v % Fp::MOD);
    }
    return k;
}

const std::array<Fp, MIMC_ROUNDS>& round_constants() {
    static const auto k = make_round_constants();
    return k;
}

Fp pow7(Fp x) {
    Fp x2 = x * x;
    return x2 * x2 * x2 * x;
}

} // namespace

Fp mimc_round_constant(std::size_t j) { return round_constants()[j]; }

Fp mimc_permute(Fp x) {
    for (std::size_t j = 0; j < MIMC_ROUNDS; ++j) x = pow7(x + round_constants()[j]);
    return x;
}

Fp lc_keygen(Fp sk) { return mimc_permute(sk); }
Fp lc_sign(Fp sk, Fp message) { return mimc_permute(sk + message); }
bool lc_sig_valid(Fp pk, Fp sig, Fp sk, Fp message) {
    return lc_keygen(sk) == pk && lc_sign(sk, message) == sig;
}

Fp digest_to_field(const Digest& d) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{d[i]} << (8 * i);
    return Fp::from_raw_unchecked(v % Fp::MOD);
}

LayeredCircuit build_signature_subcircuit() {
    // Wire layouts between the permutation layers:
    //   state layer: [c1, c2, pk, sig, 0, 0, 0, 0] where c1, c2 are the two
    //   running permutation chains P(sk) and P(sk + message).
    LayeredCircuit c;
    c.input_size = 8;
    c.public_inputs = 4;

    std::vector<Layer> bottom_up; // built input-side first, reversed at the end
    Fp one = Fp::one(), neg1 = -Fp::one();

    // input [msg, pk, sig, 1, sk, 0, 0, 0] -> state [sk, sk+msg, pk, sig, ...]
    {
        Layer l{std::vector<Gate>(8)};
        l.gates[0] = Gate::pass(4);
        l.gates[1] = Gate::lin(4, 0, one, one, Fp::zero());
        l.gates[2] = Gate::pass(1);
        l.gates[3] = Gate::pass(2);
        bottom_up.push_back(std::move(l));
    }

    for (std::size_t j = 0; j < MIMC_ROUNDS; ++j) {
        Fp k = round_constants()[j];
        // state -> [t1, t2, pk, sig] with t = c + K[j]
        Layer add_k{std::vector<Gate>(8)};
        add_k.gates[0] = Gate::lin(0, 0, one, Fp::zero(), k);
        add_k.gates[1] = Gate::lin(1, 1, one, Fp::zero(), k);
        add_k.gates[2] = Gate::pass(2);
        add_k.gates[3] = Gate::pass(3);
        bottom_up.push_back(std::move(add_k));

        // -> [t1^2, t1, t2^2, t2, pk, sig]
        Layer sq{std::vector<Gate>(8)};
        sq.gates[0] = Gate::mul(0, 0);
        sq.gates[1] = Gate::pass(0);
        sq.gates[2] = Gate::mul(1, 1);
        sq.gates[3] = Gate::pass(1);
        sq.gates[4] = Gate::pass(2);
        sq.gates[5] = Gate::pass(3);
        bottom_up.push_back(std::move(sq));

        // -> [t1^4, t1^3, t2^4, t2^3, pk, sig]
        Layer q{std::vector<Gate>(8)};
        q.gates[0] = Gate::mul(0, 0);
        q.gates[1] = Gate::mul(0, 1);
        q.gates[2] = Gate::mul(2, 2);
        q.gates[3] = Gate::mul(2, 3);
        q.gates[4] = Gate::pass(4);
        q.gates[5] = Gate::pass(5);
        bottom_up.push_back(std::move(q));

        // -> state' [t1^7, t2^7, pk, sig]
        Layer sev{std::vector<Gate>(8)};
        sev.gates[0] = Gate::mul(0, 1);
        sev.gates[1] = Gate::mul(2, 3);
        sev.gates[2] = Gate::pass(4);
        sev.gates[3] = Gate::pass(5);
        bottom_up.push_back(std::move(sev));
    }

    // state -> [pk - c1, sig - c2]
    {
        Layer diff{std::vector<Gate>(2)};
        diff.gates[0] = Gate::lin(2, 0, one, neg1, Fp::zero());
        diff.gates[1] = Gate::lin(3, 1, one, neg1, Fp::zero());
        bottom_up.push_back(std::move(diff));
    }
    // -> output [1 - d1, 1 - d2]
    {
        Layer out{std::vector<Gate>(2)};
        out.gates[0] = Gate::lin(0, 0, neg1, Fp::zero(), one);
        out.gates[1] = Gate::lin(1, 1, neg1, Fp::zero(), one);
        bottom_up.push_back(std::move(out));
    }

    c.layers.assign(bottom_up.rbegin(), bottom_up.rend());
    c.validate();
    return c;
}

DataParallelCircuit build_light_client_circuit(std::size_t n_sig) {
    static const LayeredCircuit sub = build_signature_subcircuit();
    return replicate(sub, n_sig);
}

std::vector<Fp> lc_copy_input(Fp message, Fp pk, Fp sig, Fp sk) {
    return {message, pk, sig, Fp::one(), sk, Fp::zero(), Fp::zero(), Fp::zero()};
}

} // namespace zkb
