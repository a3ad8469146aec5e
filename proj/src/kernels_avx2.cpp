// AVX2+FMA variant of the Maxwell-Bloch packet loop. Compiled with
// -mavx2 -mfma for this translation unit only; the dispatcher guards
// execution behind a runtime CPUID check.
#include "maserbloch/kernels.hpp"

#if defined(MBLOCH_HAVE_AVX2)

#include <immintrin.h>

namespace mbloch::kernels {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

RhsSums rhs_avx2(const RhsArgs& in, double* dre_sm, double* dim_sm, double* dsz) {
    const std::size_t n = in.n;
    const std::size_t nv = n & ~std::size_t{3};

    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    __m256d acc_sz = _mm256_setzero_pd();
    for (std::size_t j = 0; j < nv; j += 4) {
        const __m256d w = _mm256_loadu_pd(in.weight + j);
        acc_re = _mm256_fmadd_pd(w, _mm256_loadu_pd(in.re_sm + j), acc_re);
        acc_im = _mm256_fmadd_pd(w, _mm256_loadu_pd(in.im_sm + j), acc_im);
        acc_sz = _mm256_fmadd_pd(w, _mm256_loadu_pd(in.sz + j), acc_sz);
    }
    RhsSums sums;
    sums.weighted_re_sm = hsum(acc_re);
    sums.weighted_im_sm = hsum(acc_im);
    sums.mean_inversion = hsum(acc_sz);
    for (std::size_t j = nv; j < n; ++j) {
        sums.weighted_re_sm += in.weight[j] * in.re_sm[j];
        sums.weighted_im_sm += in.weight[j] * in.im_sm[j];
        sums.mean_inversion += in.weight[j] * in.sz[j];
    }

    const __m256d gperp = _mm256_set1_pd(in.gamma_perp);
    const __m256d off = _mm256_set1_pd(in.detuning_offset);
    const __m256d g_re_a = _mm256_set1_pd(in.g_rho * in.re_a);
    const __m256d g_im_a = _mm256_set1_pd(in.g_rho * in.im_a);
    const __m256d four_g_re_a = _mm256_set1_pd(4.0 * in.g_rho * in.re_a);
    const __m256d four_g_im_a = _mm256_set1_pd(4.0 * in.g_rho * in.im_a);
    const __m256d jfill = _mm256_set1_pd(in.j_fill);
    const __m256d pvec = _mm256_set1_pd(sums.mean_inversion);

    for (std::size_t j = 0; j < nv; j += 4) {
        const __m256d re = _mm256_loadu_pd(in.re_sm + j);
        const __m256d im = _mm256_loadu_pd(in.im_sm + j);
        const __m256d sz = _mm256_loadu_pd(in.sz + j);
        const __m256d det = _mm256_add_pd(_mm256_loadu_pd(in.detuning + j), off);

        // dre = -gperp*re + det*im + (g*re_a)*sz
        __m256d dre = _mm256_fmadd_pd(det, im, _mm256_mul_pd(g_re_a, sz));
        dre = _mm256_fnmadd_pd(gperp, re, dre);
        // dim = -gperp*im - det*re + (g*im_a)*sz
        __m256d dim = _mm256_fnmadd_pd(det, re, _mm256_mul_pd(g_im_a, sz));
        dim = _mm256_fnmadd_pd(gperp, im, dim);
        // dsz = -(4g*re_a)*re - (4g*im_a)*im + jfill*(p - sz)
        __m256d dz = _mm256_mul_pd(jfill, _mm256_sub_pd(pvec, sz));
        dz = _mm256_fnmadd_pd(four_g_re_a, re, dz);
        dz = _mm256_fnmadd_pd(four_g_im_a, im, dz);

        _mm256_storeu_pd(dre_sm + j, dre);
        _mm256_storeu_pd(dim_sm + j, dim);
        _mm256_storeu_pd(dsz + j, dz);
    }
    for (std::size_t j = nv; j < n; ++j) {
        const double re = in.re_sm[j];
        const double im = in.im_sm[j];
        const double sz = in.sz[j];
        const double det = in.detuning[j] + in.detuning_offset;
        dre_sm[j] = -in.gamma_perp * re + det * im + in.g_rho * in.re_a * sz;
        dim_sm[j] = -in.gamma_perp * im - det * re + in.g_rho * in.im_a * sz;
        dsz[j] = -4.0 * in.g_rho * (in.re_a * re + in.im_a * im) +
                 in.j_fill * (sums.mean_inversion - sz);
    }
    return sums;
}

}  // namespace mbloch::kernels

#endif  // MBLOCH_HAVE_AVX2
