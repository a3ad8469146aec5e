#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "maserbloch/common.hpp"

namespace mbloch {

struct IntegratorOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double h_max = std::numeric_limits<double>::infinity();
    std::uint64_t max_steps = 500'000'000;
};

struct IntegratorStats {
    std::uint64_t steps_accepted = 0;
    std::uint64_t steps_rejected = 0;
    std::uint64_t rhs_evals = 0;
};

/// Embedded Dormand-Prince 5(4) with the classic quartic dense-output
/// interpolant. Advances `y` in place from t0 to t1 and invokes
/// `on_sample(t_s, y_interp)` for every requested sample time in [t0, t1],
/// evaluated from the continuous extension of the accepted steps.
///
/// RhsFn:    void(double t, const double* y, double* dydt)
/// SampleFn: void(double t, const double* y)
///
/// `sample_times` must be sorted ascending; entries outside (t0, t1] are
/// ignored except t0 itself, which is emitted from the initial state.
template <class RhsFn, class SampleFn>
IntegratorStats integrate_dopri5(RhsFn&& rhs, std::vector<double>& y, double t0, double t1,
                                 std::span<const double> sample_times,
                                 const IntegratorOptions& opt, SampleFn&& on_sample) {
    // clang-format off
    constexpr double c2 = 1.0/5, c3 = 3.0/10, c4 = 4.0/5, c5 = 8.0/9;
    constexpr double a21 = 1.0/5;
    constexpr double a31 = 3.0/40, a32 = 9.0/40;
    constexpr double a41 = 44.0/45, a42 = -56.0/15, a43 = 32.0/9;
    constexpr double a51 = 19372.0/6561, a52 = -25360.0/2187, a53 = 64448.0/6561, a54 = -212.0/729;
    constexpr double a61 = 9017.0/3168, a62 = -355.0/33, a63 = 46732.0/5247, a64 = 49.0/176, a65 = -5103.0/18656;
    constexpr double b1 = 35.0/384, b3 = 500.0/1113, b4 = 125.0/192, b5 = -2187.0/6784, b6 = 11.0/84;
    constexpr double e1 = 71.0/57600, e3 = -71.0/16695, e4 = 71.0/1920, e5 = -17253.0/339200, e6 = 22.0/525, e7 = -1.0/40;
    constexpr double d1 = -12715105075.0/11282082432.0, d3 = 87487479700.0/32700410799.0,
                     d4 = -10690763975.0/1880347072.0, d5 = 701980252875.0/199316789632.0,
                     d6 = -1453857185.0/822651844.0, d7 = 69997945.0/29380423.0;
    // clang-format on

    const std::size_t n = y.size();
    IntegratorStats stats;

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> ytmp(n), ynew(n), yerr(n), yint(n);
    std::vector<double> rc2(n), rc3(n), rc4(n), rc5(n);

    std::size_t sample_idx = 0;
    while (sample_idx < sample_times.size() && sample_times[sample_idx] < t0) ++sample_idx;
    if (sample_idx < sample_times.size() && sample_times[sample_idx] == t0) {
        on_sample(t0, y.data());
        ++sample_idx;
    }
    if (t1 <= t0) return stats;

    auto check_finite = [&](const std::vector<double>& v, double t) {
        for (double x : v)
            if (!std::isfinite(x))
                throw numeric_error("integration produced a non-finite value at t = " +
                                    format_double(t) + " s");
    };

    double t = t0;
    rhs(t, y.data(), k1.data());
    ++stats.rhs_evals;
    check_finite(k1, t);

    // Initial step size: Hairer-Norsett-Wanner heuristic.
    double h;
    {
        double d0 = 0.0, d1n = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1n += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / n);
        d1n = std::sqrt(d1n / n);
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 * (t1 - t0) : 0.01 * d0 / d1n;
        h0 = std::min(h0, t1 - t0);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h0 * k1[i];
        rhs(t + h0, ytmp.data(), k2.data());
        ++stats.rhs_evals;
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y[i]);
            d2 += ((k2[i] - k1[i]) / sc) * ((k2[i] - k1[i]) / sc);
        }
        d2 = std::sqrt(d2 / n) / h0;
        const double dm = std::max(d1n, d2);
        const double h1 = (dm <= 1e-15) ? std::max(1e-6 * (t1 - t0), h0 * 1e-3)
                                        : std::pow(0.01 / dm, 0.2);
        h = std::min({100.0 * h0, h1, t1 - t0, opt.h_max});
    }

    bool last_rejected = false;
    while (t < t1) {
        if (stats.steps_accepted + stats.steps_rejected >= opt.max_steps)
            throw numeric_error("integration exceeded the maximum step count at t = " +
                                format_double(t) + " s");
        if (!(h > std::abs(t) * 1e-14 + 1e-300))
            throw numeric_error("step size underflow (stiffness?) at t = " + format_double(t) +
                                " s, h = " + format_double(h));
        h = std::min(h, t1 - t);

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp.data(), k2.data());
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp.data(), k3.data());
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp.data(), k4.data());
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp.data(), k5.data());
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, ytmp.data(), k6.data());
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, ynew.data(), k7.data());
        stats.rhs_evals += 6;

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (yerr[i] / sc) * (yerr[i] / sc);
        }
        err = std::sqrt(err / n);
        if (!std::isfinite(err)) {
            check_finite(ynew, t + h);
            throw numeric_error("non-finite error estimate at t = " + format_double(t) + " s");
        }

        if (err <= 1.0) {
            const double tnew = t + h;
            // Continuous extension over [t, tnew].
            bool need_dense = sample_idx < sample_times.size() && sample_times[sample_idx] <= tnew;
            if (need_dense) {
                for (std::size_t i = 0; i < n; ++i) {
                    const double dy = ynew[i] - y[i];
                    const double bspl = h * k1[i] - dy;
                    rc2[i] = dy;
                    rc3[i] = bspl;
                    rc4[i] = dy - h * k7[i] - bspl;
                    rc5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                  d6 * k6[i] + d7 * k7[i]);
                }
                while (sample_idx < sample_times.size() && sample_times[sample_idx] <= tnew) {
                    const double ts = sample_times[sample_idx];
                    const double th = (ts - t) / h;
                    const double th1 = 1.0 - th;
                    for (std::size_t i = 0; i < n; ++i)
                        yint[i] = y[i] + th * (rc2[i] + th1 * (rc3[i] + th * (rc4[i] + th1 * rc5[i])));
                    on_sample(ts, yint.data());
                    ++sample_idx;
                }
            }
            y.swap(ynew);
            k1.swap(k7);  // FSAL
            t = tnew;
            check_finite(y, t);
            ++stats.steps_accepted;

            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
            h = std::min(h * fac, opt.h_max);
            last_rejected = false;
        } else {
            ++stats.steps_rejected;
            const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
            h *= fac;
            last_rejected = true;
        }
    }
    return stats;
}

}  // namespace mbloch
