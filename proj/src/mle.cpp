#include "zkb/mle.hpp"

#include <stdexcept>

#include "zkb/kernels.hpp"

namespace zkb {

MultilinearTable::MultilinearTable(std::size_t vars, std::vector<Fp> e)
    : num_vars(vars), evals(std::move(e)) {
    if (evals.size() != (std::size_t{1} << num_vars))
        throw std::invalid_argument("MultilinearTable: length must be 2^num_vars");
}

Fp mle_evaluate(std::span<const Fp> evals, std::span<const Fp> point) {
    if (evals.size() != (std::size_t{1} << point.size()))
        throw std::invalid_argument("mle_evaluate: dimension mismatch");
    std::vector<Fp> buf(evals.begin(), evals.end());
    // Fold the highest variable first so the halves stay contiguous.
    std::size_t half = buf.size() / 2;
    for (std::size_t j = point.size(); j-- > 0; half /= 2) {
        kernels::active_ops().fold(kernels::raw(buf.data()), kernels::raw(buf.data() + half),
                                   point[j].value(), kernels::raw(buf.data()), half);
    }
    return buf.empty() ? Fp::zero() : buf[0];
}

Fp mle_evaluate(const MultilinearTable& table, std::span<const Fp> point) {
    if (point.size() != table.num_vars)
        throw std::invalid_argument("mle_evaluate: dimension mismatch");
    return mle_evaluate(std::span<const Fp>(table.evals), point);
}

Fp beta_evaluate(std::span<const Fp> x, std::span<const Fp> y) {
    if (x.size() != y.size()) throw std::invalid_argument("beta_evaluate: dimension mismatch");
    Fp acc = Fp::one();
    for (std::size_t j = 0; j < x.size(); ++j) {
        Fp xy = x[j] * y[j];
        acc *= Fp::one() - x[j] - y[j] + xy + xy;
    }
    return acc;
}

std::vector<Fp> beta_table_scaled(std::span<const Fp> point, Fp scale) {
    std::vector<Fp> t(std::size_t{1} << point.size());
    t[0] = scale;
    std::size_t sz = 1;
    for (Fp x : point) {
        for (std::size_t i = 0; i < sz; ++i) {
            t[i + sz] = t[i] * x;
            t[i] = t[i] - t[i + sz];
        }
        sz *= 2;
    }
    return t;
}

std::vector<Fp> beta_table(std::span<const Fp> point) {
    return beta_table_scaled(point, Fp::one());
}

} // namespace zkb
