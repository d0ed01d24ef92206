#pragma once

#include <cstdint>
#include <cstddef>
#include <string>

#include "zkb/field.hpp"

namespace zkb::kernels {

// Element-wise field kernels over raw canonical u64 arrays. All inputs must
// be canonical (< p); outputs are canonical. Aliasing out == a or out == b
// is allowed.
struct Ops {
    void (*add)(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t n);
    void (*sub)(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t n);
    void (*mul)(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t n);
    void (*scale)(const std::uint64_t* a, std::uint64_t s, std::uint64_t* out, std::size_t n);
    // out[i] = a[i] + r*(b[i] - a[i])  (multilinear fold step)
    void (*fold)(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t r,
                 std::uint64_t* out, std::size_t n);
    const char* name;
};

const Ops& scalar_ops();
#if defined(__x86_64__)
const Ops& avx2_ops();
#endif

// Best kernel set for the running CPU, resolved once at startup.
const Ops& active_ops();

// Forced selection for tests/benchmarks ("scalar", "avx2", "auto").
void select_backend(const std::string& name);

inline Fp* as_fp(std::uint64_t* p) { return reinterpret_cast<Fp*>(p); }
inline const std::uint64_t* raw(const Fp* p) { return reinterpret_cast<const std::uint64_t*>(p); }
inline std::uint64_t* raw(Fp* p) { return reinterpret_cast<std::uint64_t*>(p); }

} // namespace zkb::kernels
