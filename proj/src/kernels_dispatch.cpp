#include "maserbloch/kernels.hpp"

namespace mbloch::kernels {

bool cpu_supports_avx2() {
#if defined(MBLOCH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

RhsKernel select(std::string_view name) {
    if (name == "scalar") return &rhs_scalar;
#if defined(MBLOCH_HAVE_AVX2)
    if (name == "avx2") {
        if (!cpu_supports_avx2())
            throw config_error("kernel 'avx2' requested but this CPU lacks AVX2/FMA");
        return &rhs_avx2;
    }
    if (name == "auto") return cpu_supports_avx2() ? &rhs_avx2 : &rhs_scalar;
#else
    if (name == "avx2")
        throw config_error("kernel 'avx2' requested but this build has no AVX2 support");
    if (name == "auto") return &rhs_scalar;
#endif
    throw config_error("unknown kernel '" + std::string(name) +
                       "' (valid: auto, scalar" +
#if defined(MBLOCH_HAVE_AVX2)
                       ", avx2" +
#endif
                       std::string(")"));
}

std::string resolved_name(std::string_view name) {
#if defined(MBLOCH_HAVE_AVX2)
    if (name == "auto") return cpu_supports_avx2() ? "avx2" : "scalar";
#else
    if (name == "auto") return "scalar";
#endif
    select(name);  // validates
    return std::string(name);
}

std::vector<std::string> available() {
    std::vector<std::string> out;
#if defined(MBLOCH_HAVE_AVX2)
    if (cpu_supports_avx2()) out.push_back("avx2");
#endif
    out.push_back("scalar");
    return out;
}

}  // namespace mbloch::kernels
