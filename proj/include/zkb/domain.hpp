#pragma once

#include <cstdint>
#include <vector>

#include "zkb/field.hpp"

namespace zkb {

/// Multiplicative evaluation domain offset * <g> with |<g>| a power of two.
/// H domains use offset 1 (a plain subgroup); L domains use a multiplicative
/// generator of F* as offset, which makes them disjoint from every
/// power-of-two subgroup.
class EvaluationDomain {
public:
    enum class Kind { H, L };

    // Multiplicative generator of F* used as the L-coset offset.
    static constexpr std::uint64_t COSET_OFFSET = 7;

    static EvaluationDomain subgroup_h(std::size_t order);
    static EvaluationDomain coset_l(std::size_t order);
    // Arbitrary coset offset (used for the shrinking FRI fold domains).
    static EvaluationDomain coset(std::size_t order, Fp offset);

    std::size_t order() const { return order_; }
    Fp generator() const { return generator_; }
    Fp offset() const { return offset_; }
    Kind kind() const { return kind_; }

    // element k = offset * g^k
    Fp element(std::size_t k) const;

    // Z(x) = x^order - offset^order, the vanishing polynomial of the domain.
    Fp vanishing(Fp x) const;

    // Root of unity of exact order 2^log2_order.
    static Fp root_of_unity(unsigned log2_order);

private:
    EvaluationDomain(std::size_t order, Fp generator, Fp offset, Kind kind)
        : order_(order), generator_(generator), offset_(offset), kind_(kind) {}

    std::size_t order_;
    Fp generator_;
    Fp offset_;
    Kind kind_;
};

/// Evaluates the polynomial with the given coefficients on every point of the
/// domain: out[k] = sum_j coeffs[j] * element(k)^j. Coefficient count must be
/// a power of two and at most the domain order.
std::vector<Fp> fft_evaluate(const std::vector<Fp>& coeffs, const EvaluationDomain& domain);

/// Inverse of fft_evaluate on a matching domain: recovers the unique
/// degree-<m polynomial through the m points.
std::vector<Fp> ifft_interpolate(const std::vector<Fp>& evals, const EvaluationDomain& domain);

} // namespace zkb
