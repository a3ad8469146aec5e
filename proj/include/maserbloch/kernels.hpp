#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "maserbloch/common.hpp"

namespace mbloch::kernels {

/// Inputs of one Maxwell-Bloch right-hand-side evaluation over all spin
/// packets. All arrays have length n and may not alias the outputs.
struct RhsArgs {
    std::size_t n = 0;
    const double* re_sm = nullptr;    ///< Re <sigma_-^j>
    const double* im_sm = nullptr;    ///< Im <sigma_-^j>
    const double* sz = nullptr;       ///< <sigma_z^j>
    const double* detuning = nullptr; ///< static packet detunings (rad/s)
    const double* weight = nullptr;   ///< packet weights rho_j
    double detuning_offset = 0.0;     ///< uniform hold offset added to every detuning
    double re_a = 0.0;                ///< cavity field
    double im_a = 0.0;
    double g_rho = 0.0;
    double gamma_perp = 0.0;
    double j_fill = 0.0;
};

/// Weighted reductions produced alongside the derivative arrays.
struct RhsSums {
    double weighted_re_sm = 0.0;  ///< sum_j rho_j Re <sigma_-^j>
    double weighted_im_sm = 0.0;  ///< sum_j rho_j Im <sigma_-^j>
    double mean_inversion = 0.0;  ///< p = sum_j rho_j <sigma_z^j>
};

/// Writes d<sigma_-^j> (split re/im) and d<sigma_z^j> and returns the sums
/// needed to assemble d<a>:
///   d sigma_-^j = -(gamma_perp + i (Delta_j + offset)) sigma_-^j + g_rho a sigma_z^j
///   d sigma_z^j = -4 g_rho Re(conj(a) sigma_-^j) + j_fill (p - sigma_z^j)
using RhsKernel = RhsSums (*)(const RhsArgs&, double* dre_sm, double* dim_sm, double* dsz);

/// Scalar reference implementation; always available on every platform.
RhsSums rhs_scalar(const RhsArgs&, double* dre_sm, double* dim_sm, double* dsz);

#if defined(MBLOCH_HAVE_AVX2)
/// AVX2+FMA implementation; call only when cpu_supports_avx2() is true.
RhsSums rhs_avx2(const RhsArgs&, double* dre_sm, double* dim_sm, double* dsz);
#endif

/// True when the running CPU can execute the AVX2 kernel.
bool cpu_supports_avx2();

/// Resolve a kernel by name: "auto" (best available), "scalar", "avx2".
/// Throws config_error for unknown names or unsupported requests.
RhsKernel select(std::string_view name);

/// Name of the kernel `select` resolves to, for manifests and logs.
std::string resolved_name(std::string_view name);

/// Kernel names usable on this machine, best first.
std::vector<std::string> available();

}  // namespace mbloch::kernels
