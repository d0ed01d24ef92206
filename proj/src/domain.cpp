#include "zkb/domain.hpp"

#include <stdexcept>

#include "zkb/kernels.hpp"

namespace zkb {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

unsigned log2_exact(std::size_t n) {
    unsigned k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

// In-place radix-2 NTT, natural order in, natural order out.
void ntt(std::vector<Fp>& a, Fp root) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        Fp wlen = root.pow(n / len);
        for (std::size_t i = 0; i < n; i += len) {
            Fp w = Fp::one();
            for (std::size_t j = 0; j < len / 2; ++j) {
                Fp u = a[i + j];
                Fp v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

} // namespace

Fp EvaluationDomain::root_of_unity(unsigned log2_order) {
    if (log2_order > 32) throw std::invalid_argument("domain order exceeds 2-adicity");
    // 7 generates F*, so this power has exact order 2^log2_order.
    static const Fp g32 = Fp(7).pow((Fp::MOD - 1) >> 32);
    return g32.pow(std::uint64_t{1} << (32 - log2_order));
}

EvaluationDomain EvaluationDomain::subgroup_h(std::size_t order) {
    if (!is_pow2(order)) throw std::invalid_argument("domain order must be a power of two");
    return EvaluationDomain(order, root_of_unity(log2_exact(order)), Fp::one(), Kind::H);
}

EvaluationDomain EvaluationDomain::coset_l(std::size_t order) {
    if (!is_pow2(order)) throw std::invalid_argument("domain order must be a power of two");
    return EvaluationDomain(order, root_of_unity(log2_exact(order)), Fp(COSET_OFFSET), Kind::L);
}

EvaluationDomain EvaluationDomain::coset(std::size_t order, Fp offset) {
    if (!is_pow2(order)) throw std::invalid_argument("domain order must be a power of two");
    if (offset.is_zero()) throw std::invalid_argument("domain offset must be nonzero");
    return EvaluationDomain(order, root_of_unity(log2_exact(order)), offset,
                            offset == Fp::one() ? Kind::H : Kind::L);
}

Fp EvaluationDomain::element(std::size_t k) const {
    return offset_ * generator_.pow(k % order_);
}

Fp EvaluationDomain::vanishing(Fp x) const {
    return x.pow(order_) - offset_.pow(order_);
}

std::vector<Fp> fft_evaluate(const std::vector<Fp>& coeffs, const EvaluationDomain& domain) {
    if (!is_pow2(coeffs.size())) throw std::invalid_argument("fft: size must be a power of two");
    if (coeffs.size() > domain.order())
        throw std::invalid_argument("fft: more coefficients than domain points");
    std::vector<Fp> a = coeffs;
    a.resize(domain.order(), Fp::zero());
    if (domain.offset() != Fp::one()) {
        Fp pow = Fp::one();
        for (auto& c : a) {
            c *= pow;
            pow *= domain.offset();
        }
    }
    ntt(a, domain.generator());
    return a;
}

std::vector<Fp> ifft_interpolate(const std::vector<Fp>& evals, const EvaluationDomain& domain) {
    if (evals.size() != domain.order())
        throw std::invalid_argument("ifft: evaluation count must equal domain order");
    std::vector<Fp> a = evals;
    ntt(a, domain.generator().inverse());
    Fp inv_n = Fp(static_cast<std::uint64_t>(a.size())).inverse();
    kernels::active_ops().scale(kernels::raw(a.data()), inv_n.value(), kernels::raw(a.data()),
                                a.size());
    if (domain.offset() != Fp::one()) {
        Fp inv_off = domain.offset().inverse();
        Fp pow = Fp::one();
        for (auto& c : a) {
            c *= pow;
            pow *= inv_off;
        }
    }
    return a;
}

} // namespace zkb
