#pragma once

#include <functional>
#include <span>
#include <vector>

#include "maserbloch/common.hpp"

namespace mbloch {

struct LmOptions {
    int max_iter = 200;
    double ftol = 1e-14;        ///< relative cost decrease considered converged
    double lambda_init = 1e-3;  ///< initial Marquardt damping
};

struct LmResult {
    std::vector<double> params;
    double cost = 0.0;           ///< sum of squared residuals
    double residual_norm = 0.0;  ///< sqrt(cost)
    int iterations = 0;
    bool converged = false;
    std::vector<double> covariance;  ///< p x p row-major, scaled by cost/(n-p); empty if singular
};

/// Model value at one abscissa: f(x, params).
using LmModel = std::function<double(double, std::span<const double>)>;

/// Damped least squares (Levenberg-Marquardt) with a central-difference
/// Jacobian and normal equations solved by Gaussian elimination with
/// partial pivoting. Intended for the few-parameter fits used here.
LmResult lm_fit(const LmModel& model, std::span<const double> x, std::span<const double> y,
                std::vector<double> p0, const LmOptions& opt = {});

/// Ordinary least-squares line fit; returns {slope, intercept, r_squared}.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation coefficient (average ranks on ties).
double spearman_rank_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace mbloch
