#include "zkb/kernels.hpp"

namespace zkb::kernels {

namespace {

void add_scalar(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t s = a[i] + b[i];
        if (s < a[i]) s += Fp::EPSILON;
        if (s >= Fp::MOD) s -= Fp::MOD;
        out[i] = s;
    }
}

void sub_scalar(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t d = a[i] - b[i];
        if (a[i] < b[i]) d -= Fp::EPSILON;
        out[i] = d;
    }
}

void mul_scalar(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = Fp::mul_reduce(a[i], b[i]);
}

void scale_scalar(const std::uint64_t* a, std::uint64_t s, std::uint64_t* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = Fp::mul_reduce(a[i], s);
}

void fold_scalar(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t r,
                 std::uint64_t* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t d = b[i] - a[i];
        if (b[i] < a[i]) d -= Fp::EPSILON; // b - a
        std::uint64_t t = Fp::mul_reduce(r, d);
        std::uint64_t s = a[i] + t;
        if (s < a[i]) s += Fp::EPSILON;
        if (s >= Fp::MOD) s -= Fp::MOD;
        out[i] = s;
    }
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops{add_scalar, sub_scalar, mul_scalar, scale_scalar, fold_scalar, "scalar"};
    return ops;
}

} // namespace zkb::kernels
