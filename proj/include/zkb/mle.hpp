#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "zkb/field.hpp"

namespace zkb {

/// Dense table of a function {0,1}^num_vars -> F, little-endian packed:
/// entry i holds the value at the boolean point whose j-th coordinate is
/// bit (j-1) of i.
struct MultilinearTable {
    std::size_t num_vars = 0;
    std::vector<Fp> evals;

    MultilinearTable() = default;
    MultilinearTable(std::size_t vars, std::vector<Fp> e);

    std::size_t size() const { return evals.size(); }
};

/// Multilinear-extension evaluation at an arbitrary field point, O(2^l) by
/// iterative folding.
Fp mle_evaluate(const MultilinearTable& table, std::span<const Fp> point);
Fp mle_evaluate(std::span<const Fp> evals, std::span<const Fp> point);

/// beta(x, y) = prod_j ((1-x_j)(1-y_j) + x_j y_j), the multilinear extension
/// of the equality predicate.
Fp beta_evaluate(std::span<const Fp> x, std::span<const Fp> y);

/// Expands beta(point, .) over the whole hypercube: out[i] = beta(point, b_i).
std::vector<Fp> beta_table(std::span<const Fp> point);

/// Same, scaled by a constant factor.
std::vector<Fp> beta_table_scaled(std::span<const Fp> point, Fp scale);

} // namespace zkb
