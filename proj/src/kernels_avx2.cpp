#if defined(__x86_64__)

#include "zkb/kernels.hpp"

#include <immintrin.h>

namespace zkb::kernels {

namespace {

const __m256i kMod = _mm256_set1_epi64x(static_cast<long long>(Fp::MOD));
const __m256i kEps = _mm256_set1_epi64x(static_cast<long long>(Fp::EPSILON));
const __m256i kSign = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
const __m256i kLow32 = _mm256_set1_epi64x(static_cast<long long>(0xFFFFFFFFULL));

inline __m256i ltu(__m256i a, __m256i b) {
    // unsigned a < b via signed compare with flipped sign bit
    return _mm256_cmpgt_epi64(_mm256_xor_si256(b, kSign), _mm256_xor_si256(a, kSign));
}

inline __m256i add_mod(__m256i a, __m256i b) {
    __m256i s = _mm256_add_epi64(a, b);
    s = _mm256_add_epi64(s, _mm256_and_si256(ltu(s, a), kEps));
    __m256i ge = _mm256_andnot_si256(ltu(s, kMod), kMod);
    return _mm256_sub_epi64(s, ge);
}

inline __m256i sub_mod(__m256i a, __m256i b) {
    __m256i d = _mm256_sub_epi64(a, b);
    return _mm256_sub_epi64(d, _mm256_and_si256(ltu(a, b), kEps));
}

inline __m256i mul_mod(__m256i a, __m256i b) {
    __m256i a_hi = _mm256_srli_epi64(a, 32);
    __m256i b_hi = _mm256_srli_epi64(b, 32);
    __m256i p00 = _mm256_mul_epu32(a, b);
    __m256i p01 = _mm256_mul_epu32(a, b_hi);
    __m256i p10 = _mm256_mul_epu32(a_hi, b);
    __m256i p11 = _mm256_mul_epu32(a_hi, b_hi);

    // cross terms: t <= (2^32-1) + 2*(2^32-1) fits in 64 bits
    __m256i t = _mm256_add_epi64(_mm256_srli_epi64(p00, 32),
                                 _mm256_add_epi64(_mm256_and_si256(p01, kLow32),
                                                  _mm256_and_si256(p10, kLow32)));
    __m256i lo = _mm256_or_si256(_mm256_and_si256(p00, kLow32), _mm256_slli_epi64(t, 32));
    __m256i hi = _mm256_add_epi64(
        p11, _mm256_add_epi64(_mm256_srli_epi64(t, 32),
                              _mm256_add_epi64(_mm256_srli_epi64(p01, 32),
                                               _mm256_srli_epi64(p10, 32))));

    // reduce lo + 2^64*hi: 2^64 = 2^32 - 1, 2^96 = -1 (mod p)
    __m256i hi_hi = _mm256_srli_epi64(hi, 32);
    __m256i hi_lo = _mm256_and_si256(hi, kLow32);
    __m256i t1 = _mm256_sub_epi64(lo, hi_hi);
    t1 = _mm256_sub_epi64(t1, _mm256_and_si256(ltu(lo, hi_hi), kEps));
    __m256i mid = _mm256_sub_epi64(_mm256_slli_epi64(hi_lo, 32), hi_lo);
    __m256i s = _mm256_add_epi64(t1, mid);
    s = _mm256_add_epi64(s, _mm256_and_si256(ltu(s, t1), kEps));
    __m256i ge = _mm256_andnot_si256(ltu(s, kMod), kMod);
    return _mm256_sub_epi64(s, ge);
}

void add_avx2(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), add_mod(va, vb));
    }
    for (; i < n; ++i) {
        std::uint64_t s = a[i] + b[i];
        if (s < a[i]) s += Fp::EPSILON;
        if (s >= Fp::MOD) s -= Fp::MOD;
        out[i] = s;
    }
}

void sub_avx2(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), sub_mod(va, vb));
    }
    for (; i < n; ++i) {
        std::uint64_t d = a[i] - b[i];
        if (a[i] < b[i]) d -= Fp::EPSILON;
        out[i] = d;
    }
}

void mul_avx2(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), mul_mod(va, vb));
    }
    for (; i < n; ++i) out[i] = Fp::mul_reduce(a[i], b[i]);
}

void scale_avx2(const std::uint64_t* a, std::uint64_t s, std::uint64_t* out, std::size_t n) {
    __m256i vs = _mm256_set1_epi64x(static_cast<long long>(s));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), mul_mod(va, vs));
    }
    for (; i < n; ++i) out[i] = Fp::mul_reduce(a[i], s);
}

void fold_avx2(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t r,
               std::uint64_t* out, std::size_t n) {
    __m256i vr = _mm256_set1_epi64x(static_cast<long long>(r));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i d = sub_mod(vb, va);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), add_mod(va, mul_mod(vr, d)));
    }
    for (; i < n; ++i) {
        std::uint64_t d = b[i] - a[i];
        if (b[i] < a[i]) d -= Fp::EPSILON;
        std::uint64_t t = Fp::mul_reduce(r, d);
        std::uint64_t s = a[i] + t;
        if (s < a[i]) s += Fp::EPSILON;
        if (s >= Fp::MOD) s -= Fp::MOD;
        out[i] = s;
    }
}

} // namespace

const Ops& avx2_ops() {
    static const Ops ops{add_avx2, sub_avx2, mul_avx2, scale_avx2, fold_avx2, "avx2"};
    return ops;
}

} // namespace zkb::kernels

#endif // __x86_64__
