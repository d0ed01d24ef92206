#include "zkb/kernels.hpp"

#include <stdexcept>

namespace zkb::kernels {

namespace {

const Ops* detect() {
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2")) return &avx2_ops();
#endif
    return &scalar_ops();
}

const Ops*& current() {
    static const Ops* ops = detect();
    return ops;
}

} // namespace

const Ops& active_ops() { return *current(); }

void select_backend(const std::string& name) {
    if (name == "auto") {
        current() = detect();
    } else if (name == "scalar") {
        current() = &scalar_ops();
#if defined(__x86_64__)
    } else if (name == "avx2") {
        if (!__builtin_cpu_supports("avx2"))
            throw std::runtime_error("avx2 backend not supported on this CPU");
        current() = &avx2_ops();
#endif
    } else {
        throw std::invalid_argument("unknown kernel backend: " + name);
    }
}

} // namespace zkb::kernels
