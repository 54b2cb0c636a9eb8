#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace phdnet::stats {

struct Coefficient {
    std::string label;
    double b = 0.0;          // unstandardized
    double std_error = 0.0;
    double t = 0.0;
    double p = 1.0;          // two-sided
    std::optional<double> beta;  // standardized; absent for the intercept
    std::optional<double> vif;   // absent for the intercept
};

struct RegressionReport {
    Coefficient intercept;
    std::vector<Coefficient> predictors;
    std::size_t n = 0;
    std::size_t df_model = 0;
    std::size_t df_residual = 0;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    double f_statistic = 0.0;
    double f_p = 1.0;
    /// Absent when the fit is exact and the residuals vanish.
    std::optional<double> durbin_watson;
    std::vector<double> fitted;
    std::vector<double> residuals;
};

/// Ordinary least squares with an intercept on k predictor columns.
///
/// Solved by Householder QR; a column whose pivot falls below 1e-12 of the
/// largest (after scaling columns to unit norm) is treated as exactly
/// collinear and reported by name in a SingularMatrixError. Requires
/// n > k + 1 (DimensionError) and a non-constant response
/// (UndefinedStatisticError). Durbin-Watson uses the input row order.
RegressionReport ols_fit(std::span<const std::vector<double>> columns, std::span<const double> y,
                         std::span<const std::string> labels);

/// sum (e_t - e_{t-1})^2 / sum e_t^2. Needs at least two residuals
/// (DimensionError) and a non-zero residual (UndefinedStatisticError).
double durbin_watson(std::span<const double> residuals);

}  // namespace phdnet::stats
