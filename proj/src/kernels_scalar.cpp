#include "maserbloch/kernels.hpp"

namespace mbloch::kernels {

RhsSums rhs_scalar(const RhsArgs& in, double* dre_sm, double* dim_sm, double* dsz) {
    const std::size_t n = in.n;
    RhsSums sums;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = in.weight[j];
        sums.weighted_re_sm += w * in.re_sm[j];
        sums.weighted_im_sm += w * in.im_sm[j];
        sums.mean_inversion += w * in.sz[j];
    }
    const double p = sums.mean_inversion;
    for (std::size_t j = 0; j < n; ++j) {
        const double re = in.re_sm[j];
        const double im = in.im_sm[j];
        const double sz = in.sz[j];
        const double det = in.detuning[j] + in.detuning_offset;
        dre_sm[j] = -in.gamma_perp * re + det * im + in.g_rho * in.re_a * sz;
        dim_sm[j] = -in.gamma_perp * im - det * re + in.g_rho * in.im_a * sz;
        dsz[j] = -4.0 * in.g_rho * (in.re_a * re + in.im_a * im) + in.j_fill * (p - sz);
    }
    return sums;
}

}  // namespace mbloch::kernels
