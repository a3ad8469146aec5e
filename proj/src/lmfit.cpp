#include "maserbloch/lmfit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mbloch {

namespace {

// Solve A x = b in place, A is np x np row-major. Returns false if singular.
bool solve_inplace(std::vector<double>& a, std::vector<double>& b, std::size_t np) {
    for (std::size_t col = 0; col < np; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < np; ++r)
            if (std::abs(a[r * np + col]) > std::abs(a[piv * np + col])) piv = r;
        if (std::abs(a[piv * np + col]) < 1e-300) return false;
        if (piv != col) {
            for (std::size_t c = 0; c < np; ++c) std::swap(a[col * np + c], a[piv * np + c]);
            std::swap(b[col], b[piv]);
        }
        const double d = a[col * np + col];
        for (std::size_t r = col + 1; r < np; ++r) {
            const double f = a[r * np + col] / d;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < np; ++c) a[r * np + c] -= f * a[col * np + c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t ri = np; ri-- > 0;) {
        double s = b[ri];
        for (std::size_t c = ri + 1; c < np; ++c) s -= a[ri * np + c] * b[c];
        b[ri] = s / a[ri * np + ri];
    }
    return true;
}

bool invert(std::vector<double> a, std::vector<double>& inv, std::size_t np) {
    inv.assign(np * np, 0.0);
    for (std::size_t k = 0; k < np; ++k) {
        std::vector<double> acopy = a;
        std::vector<double> e(np, 0.0);
        e[k] = 1.0;
        if (!solve_inplace(acopy, e, np)) return false;
        for (std::size_t r = 0; r < np; ++r) inv[r * np + k] = e[r];
    }
    return true;
}

double cost_of(const LmModel& model, std::span<const double> x, std::span<const double> y,
               std::span<const double> p, std::vector<double>& resid) {
    double c = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        resid[i] = y[i] - model(x[i], p);
        c += resid[i] * resid[i];
    }
    return c;
}

}  // namespace

LmResult lm_fit(const LmModel& model, std::span<const double> x, std::span<const double> y,
                std::vector<double> p0, const LmOptions& opt) {
    const std::size_t n = x.size();
    const std::size_t np = p0.size();
    if (y.size() != n) throw analysis_error("lm_fit: x and y lengths differ");
    if (n < np) throw analysis_error("lm_fit: fewer points than parameters");

    LmResult res;
    res.params = std::move(p0);
    std::vector<double> resid(n), resid_try(n);
    double cost = cost_of(model, x, y, res.params, resid);

    std::vector<double> jac(n * np);
    std::vector<double> jtj(np * np), jtj_damped(np * np), jtr(np), step(np);
    double lambda = opt.lambda_init;

    int it = 0;
    for (; it < opt.max_iter; ++it) {
        // Central-difference Jacobian.
        std::vector<double> pw = res.params;
        for (std::size_t k = 0; k < np; ++k) {
            const double h = std::max(1e-7 * std::abs(pw[k]), 1e-12);
            const double orig = pw[k];
            pw[k] = orig + h;
            for (std::size_t i = 0; i < n; ++i) jac[i * np + k] = model(x[i], pw);
            pw[k] = orig - h;
            for (std::size_t i = 0; i < n; ++i)
                jac[i * np + k] = (jac[i * np + k] - model(x[i], pw)) / (2.0 * h);
            pw[k] = orig;
        }
        std::fill(jtj.begin(), jtj.end(), 0.0);
        std::fill(jtr.begin(), jtr.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t r = 0; r < np; ++r) {
                jtr[r] += jac[i * np + r] * resid[i];
                for (std::size_t c = r; c < np; ++c)
                    jtj[r * np + c] += jac[i * np + r] * jac[i * np + c];
            }
        }
        for (std::size_t r = 0; r < np; ++r)
            for (std::size_t c = 0; c < r; ++c) jtj[r * np + c] = jtj[c * np + r];

        bool improved = false;
        for (int tries = 0; tries < 24; ++tries) {
            jtj_damped = jtj;
            for (std::size_t k = 0; k < np; ++k)
                jtj_damped[k * np + k] += lambda * std::max(jtj[k * np + k], 1e-300);
            step = jtr;
            if (!solve_inplace(jtj_damped, step, np)) {
                lambda *= 10.0;
                continue;
            }
            std::vector<double> ptry = res.params;
            for (std::size_t k = 0; k < np; ++k) ptry[k] += step[k];
            const double ctry = cost_of(model, x, y, ptry, resid_try);
            if (std::isfinite(ctry) && ctry < cost) {
                const double drop = (cost - ctry) / std::max(cost, 1e-300);
                res.params = std::move(ptry);
                resid.swap(resid_try);
                cost = ctry;
                lambda = std::max(lambda * 0.25, 1e-14);
                improved = true;
                if (drop < opt.ftol) res.converged = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!improved) {
            // No downhill direction at any damping: stationary point.
            res.converged = true;
            break;
        }
        if (res.converged) break;
    }
    res.iterations = it + 1;
    res.cost = cost;
    res.residual_norm = std::sqrt(cost);

    if (n > np) {
        std::vector<double> inv;
        if (invert(jtj, inv, np)) {
            const double s2 = cost / static_cast<double>(n - np);
            for (auto& v : inv) v *= s2;
            res.covariance = std::move(inv);
        }
    }
    return res;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw analysis_error("fit_line: need at least two points");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0) throw analysis_error("fit_line: degenerate abscissa");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = (syy <= 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

double spearman_rank_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3)
        throw analysis_error("spearman: need matching series of length >= 3");
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mean = (n + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mean) * (ry[i] - mean);
        sxx += (rx[i] - mean) * (rx[i] - mean);
        syy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (sxx <= 0.0 || syy <= 0.0) throw analysis_error("spearman: constant input");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace mbloch
