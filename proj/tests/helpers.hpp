#pragma once

#include <random>
#include <vector>

#include "zkb/circuit.hpp"
#include "zkb/field.hpp"

namespace test_helpers {

inline zkb::Fp random_fp(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint64_t> dist(0, zkb::Fp::MOD - 1);
    return zkb::Fp::from_raw_unchecked(dist(rng));
}

inline std::vector<zkb::Fp> random_fps(std::mt19937_64& rng, std::size_t n) {
    std::vector<zkb::Fp> v(n);
    for (auto& x : v) x = random_fp(rng);
    return v;
}

/// Random layered circuit with the given layer sizes (output first, then the
/// input size last). Mix of add/mul/lin gates, occasional dummy gates.
inline zkb::LayeredCircuit random_circuit(std::mt19937_64& rng,
                                          const std::vector<std::size_t>& sizes) {
    zkb::LayeredCircuit c;
    c.input_size = sizes.back();
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        zkb::Layer layer{std::vector<zkb::Gate>(sizes[i])};
        std::size_t below = sizes[i + 1];
        for (auto& g : layer.gates) {
            auto l = static_cast<std::uint32_t>(rng() % below);
            auto r = static_cast<std::uint32_t>(rng() % below);
            switch (rng() % 4) {
                case 0: g = zkb::Gate::mul(l, r); break;
                case 1: g = zkb::Gate::add(l, r); break;
                case 2: g = zkb::Gate::lin(l, r, random_fp(rng), random_fp(rng), random_fp(rng)); break;
                default: g = zkb::Gate::dummy(); break;
            }
        }
        c.layers.push_back(std::move(layer));
    }
    c.validate();
    return c;
}

/// The spec's running example: output = x1*x2 + x3 (input padded to 4).
inline zkb::LayeredCircuit mul_add_circuit() {
    zkb::LayeredCircuit c;
    c.input_size = 4;
    c.layers.resize(2);
    c.layers[1].gates = {zkb::Gate::mul(0, 1), zkb::Gate::pass(2)};
    c.layers[0].gates = {zkb::Gate::add(0, 1)};
    c.validate();
    return c;
}

} // namespace test_helpers
