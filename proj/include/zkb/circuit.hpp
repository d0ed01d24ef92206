#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zkb/field.hpp"

namespace zkb {

/// Fan-in-2 gate wired into the next layer down.
///   Mul: out = V(left) * V(right)
///   Add: out = a*V(left) + b*V(right) + c
/// Plain addition is Add with a=b=1, c=0; a dummy (constant-0) gate is Add
/// with a=b=c=0.
struct Gate {
    enum class Kind : std::uint8_t { Add, Mul };

    Kind kind = Kind::Add;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    Fp a, b, c;

    static Gate add(std::uint32_t l, std::uint32_t r) {
        return {Kind::Add, l, r, Fp::one(), Fp::one(), Fp::zero()};
    }
    static Gate mul(std::uint32_t l, std::uint32_t r) {
        return {Kind::Mul, l, r, Fp::zero(), Fp::zero(), Fp::zero()};
    }
    static Gate lin(std::uint32_t l, std::uint32_t r, Fp a, Fp b, Fp c) {
        return {Kind::Add, l, r, a, b, c};
    }
    // pass wire w through unchanged
    static Gate pass(std::uint32_t w) { return lin(w, w, Fp::one(), Fp::zero(), Fp::zero()); }
    static Gate dummy() { return {}; }

    Fp eval(Fp vl, Fp vr) const {
        return kind == Kind::Mul ? vl * vr : a * vl + b * vr + c;
    }

    friend bool operator==(const Gate&, const Gate&) = default;
};

struct Layer {
    std::vector<Gate> gates; // index = output wire in this layer
};

/// Layered circuit, layer 0 = output, layer depth()-1 adjacent to the input
/// layer. Gate indexes reference the next layer (or the input for the last
/// gate layer). Every layer size and the input size are powers of two.
struct LayeredCircuit {
    std::vector<Layer> layers;
    std::size_t input_size = 0;
    // Number of public inputs occupying the LOW indexes of the input layer;
    // either 0 (all-witness) or exactly input_size/2 (public/witness split on
    // the top within-copy input bit).
    std::size_t public_inputs = 0;

    std::size_t depth() const { return layers.size(); }
    std::size_t output_size() const { return layers.front().gates.size(); }
    // size of the layer gates at `layer` read from (input if layer == depth-1)
    std::size_t fanin_size(std::size_t layer) const {
        return layer + 1 < layers.size() ? layers[layer + 1].gates.size() : input_size;
    }

    void validate() const; // throws std::invalid_argument on malformed shape
};

/// N identical copies of `sub` with no cross-copy wiring. Global wire label
/// = (local label, copy index) with the copy index in the HIGH bits, i.e.
/// global vectors are per-copy vectors concatenated in copy order.
struct DataParallelCircuit {
    LayeredCircuit sub;
    std::size_t copies = 1;

    std::size_t depth() const { return sub.depth(); }
    std::size_t layer_size(std::size_t i) const { return sub.layers[i].gates.size() * copies; }
    std::size_t fanin_size(std::size_t i) const { return sub.fanin_size(i) * copies; }
    std::size_t input_size() const { return sub.input_size * copies; }
    std::size_t output_size() const { return sub.output_size() * copies; }
};

DataParallelCircuit replicate(const LayeredCircuit& sub, std::size_t n);

/// Values of every layer of an evaluated circuit, output layer first;
/// layers[depth] is a copy of the input.
struct LayerValues {
    std::vector<std::vector<Fp>> layers;

    const std::vector<Fp>& output() const { return layers.front(); }
    const std::vector<Fp>& input() const { return layers.back(); }
};

LayerValues circuit_evaluate(const LayeredCircuit& c, std::span<const Fp> input);
LayerValues circuit_evaluate(const DataParallelCircuit& c, std::span<const Fp> input);

/// Wiring-predicate multilinear extensions of one layer, evaluated at a
/// (z, x, y) triple. `mult` is the Mul-gate predicate MLE; the three add
/// components carry the Add-gate coefficients:
///   add_a = sum_g a_g * bz(g) bx(l_g) by(r_g)   (coefficient of V(x))
///   add_b = sum_g b_g * ...                      (coefficient of V(y))
///   add_c = sum_g c_g * ...                      (constant term)
/// For plain add gates add_a = add_b = the spec's add predicate and add_c = 0.
struct WiringEval {
    Fp mult, add_a, add_b, add_c;

    friend bool operator==(const WiringEval&, const WiringEval&) = default;
};

/// Wiring evaluation with the z slot already expanded to a weight table
/// (size = global layer-i size). Used by the GKR verifier, where z-weights
/// are a random linear combination of two beta tables.
WiringEval wiring_eval_weighted(const DataParallelCircuit& c, std::size_t layer,
                                std::span<const Fp> z_weights, std::span<const Fp> x,
                                std::span<const Fp> y);

WiringEval wiring_eval(const LayeredCircuit& c, std::size_t layer, std::span<const Fp> z,
                       std::span<const Fp> x, std::span<const Fp> y);

/// (add, mult) surface for plain add/mul circuits: add is add_a, which
/// equals add_b when every Add gate has a=b=1.
std::pair<Fp, Fp> wiring_mle(const LayeredCircuit& c, std::size_t layer, std::span<const Fp> z,
                             std::span<const Fp> x, std::span<const Fp> y);

// ---- text format ------------------------------------------------------
//
//   circuit <input_size> <public_inputs>
//   layer <size>          # output layer first
//   add <o> <l> <r>
//   mul <o> <l> <r>
//   lin <o> <l> <r> <a> <b> <c>
//
// '#' starts a comment; unlisted wires in a layer are constant-0 dummy
// gates. Field constants are canonical decimal.

LayeredCircuit circuit_from_text(const std::string& text);
std::string circuit_to_text(const LayeredCircuit& c);

LayeredCircuit circuit_load(const std::string& path);
void circuit_save(const LayeredCircuit& c, const std::string& path);

/// Witness files: 8-byte LE element count, then 8-byte LE canonical elements.
std::vector<Fp> fp_vector_load(const std::string& path);
void fp_vector_save(std::span<const Fp> values, const std::string& path);

} // namespace zkb
