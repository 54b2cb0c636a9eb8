#include "phdnet/regression.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "phdnet/distributions.hpp"
#include "phdnet/error.hpp"

namespace phdnet::stats {

namespace {

constexpr double kCollinearityRatio = 1e-12;

double mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

/// Throws SingularMatrixError naming every column that is a linear
/// combination of the others. Column 0 of `design` is the intercept.
void check_rank(const Eigen::MatrixXd& design, std::span<const std::string> names) {
    Eigen::MatrixXd scaled = design;
    for (Eigen::Index c = 0; c < scaled.cols(); ++c) {
        const double norm = scaled.col(c).norm();
        if (norm > 0.0) {
            scaled.col(c) /= norm;
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
    qr.setThreshold(kCollinearityRatio);
    if (qr.rank() == scaled.cols()) {
        return;
    }

    const auto& perm = qr.colsPermutation().indices();
    std::vector<Eigen::Index> kept;
    for (Eigen::Index r = 0; r < qr.rank(); ++r) {
        kept.push_back(perm[r]);
    }
    Eigen::MatrixXd basis(scaled.rows(), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c) {
        basis.col(static_cast<Eigen::Index>(c)) = scaled.col(kept[c]);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> basis_qr(basis);

    std::string message = "design matrix is singular:";
    for (Eigen::Index r = qr.rank(); r < scaled.cols(); ++r) {
        const auto dropped = perm[r];
        message += " '" + names[static_cast<std::size_t>(dropped)] + "'";
        if (kept.empty() || scaled.col(dropped).norm() == 0.0) {
            message += " is identically zero;";
            continue;
        }
        const Eigen::VectorXd coef = basis_qr.solve(scaled.col(dropped));
        message += " is collinear with";
        for (std::size_t c = 0; c < kept.size(); ++c) {
            if (std::abs(coef[static_cast<Eigen::Index>(c)]) > 1e-8) {
                message += " '" + names[static_cast<std::size_t>(kept[c])] + "'";
            }
        }
        message += ";";
    }
    message.pop_back();
    throw SingularMatrixError(message);
}

/// R^2 of regressing `target` on `design` (which already includes the intercept).
double auxiliary_r_squared(const Eigen::MatrixXd& design, const Eigen::VectorXd& target) {
    const Eigen::VectorXd coef = design.householderQr().solve(target);
    const Eigen::VectorXd resid = target - design * coef;
    const double centered = (target.array() - target.mean()).square().sum();
    if (centered == 0.0) {
        return 1.0;
    }
    return 1.0 - resid.squaredNorm() / centered;
}

}  // namespace

RegressionReport ols_fit(std::span<const std::vector<double>> columns, std::span<const double> y,
                         std::span<const std::string> labels) {
    const std::size_t k = columns.size();
    const std::size_t n = y.size();
    if (k == 0) {
        throw DimensionError("regression needs at least one predictor");
    }
    if (labels.size() != k) {
        throw DimensionError("expected " + std::to_string(k) + " labels, got " + std::to_string(labels.size()));
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (columns[j].size() != n) {
            throw DimensionError("predictor '" + labels[j] + "' has " + std::to_string(columns[j].size()) +
                                 " rows, response has " + std::to_string(n));
        }
    }
    if (n <= k + 1) {
        throw DimensionError("regression with " + std::to_string(k) + " predictors needs more than " +
                             std::to_string(k + 1) + " observations, got " + std::to_string(n));
    }

    const auto p = static_cast<Eigen::Index>(k + 1);
    const auto rows = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd design(rows, p);
    Eigen::VectorXd response(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        design(i, 0) = 1.0;
        response[i] = y[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < k; ++j) {
            design(i, static_cast<Eigen::Index>(j + 1)) = columns[j][static_cast<std::size_t>(i)];
        }
    }
    if (!design.allFinite() || !response.allFinite()) {
        throw DataError("regression inputs must be finite");
    }

    std::vector<std::string> names{"(intercept)"};
    names.insert(names.end(), labels.begin(), labels.end());
    check_rank(design, names);

    const double y_mean = response.mean();
    const double sst = (response.array() - y_mean).square().sum();
    if (sst == 0.0) {
        throw UndefinedStatisticError("response has zero variance");
    }

    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(design);
    const Eigen::VectorXd coef = qr.solve(response);
    const Eigen::VectorXd fitted = design * coef;
    const Eigen::VectorXd resid = response - fitted;
    const double ssr = resid.squaredNorm();

    // (X^T X)^{-1} = R^{-1} R^{-T}
    const Eigen::MatrixXd r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    const Eigen::MatrixXd cov_unscaled = r_inv * r_inv.transpose();

    RegressionReport report;
    report.n = n;
    report.df_model = k;
    report.df_residual = n - k - 1;
    const auto dof = static_cast<double>(report.df_residual);
    const double sigma2 = ssr / dof;

    std::vector<double> y_vec(y.begin(), y.end());
    const double sd_y = sample_sd(y_vec);

    auto coefficient = [&](Eigen::Index idx, std::string label) {
        Coefficient c;
        c.label = std::move(label);
        c.b = coef[idx];
        c.std_error = std::sqrt(sigma2 * cov_unscaled(idx, idx));
        c.t = c.b / c.std_error;
        c.p = std::isnan(c.t) ? 1.0 : two_sided_p(c.t, dof);
        return c;
    };
    report.intercept = coefficient(0, names[0]);

    for (std::size_t j = 0; j < k; ++j) {
        const auto idx = static_cast<Eigen::Index>(j + 1);
        auto c = coefficient(idx, labels[j]);
        c.beta = c.b * sample_sd(columns[j]) / sd_y;
        if (k == 1) {
            c.vif = 1.0;
        } else {
            Eigen::MatrixXd others(rows, p - 1);
            Eigen::Index col = 0;
            for (Eigen::Index m = 0; m < p; ++m) {
                if (m != idx) {
                    others.col(col++) = design.col(m);
                }
            }
            c.vif = 1.0 / (1.0 - auxiliary_r_squared(others, design.col(idx)));
        }
        report.predictors.push_back(std::move(c));
    }

    report.r_squared = 1.0 - ssr / sst;
    report.adj_r_squared = 1.0 - (1.0 - report.r_squared) * static_cast<double>(n - 1) / dof;
    report.f_statistic = (report.r_squared / static_cast<double>(k)) / ((1.0 - report.r_squared) / dof);
    report.f_p = tail_probability(report.f_statistic, FisherF{static_cast<double>(k), dof});

    report.fitted.assign(fitted.data(), fitted.data() + rows);
    report.residuals.assign(resid.data(), resid.data() + rows);
    // Residuals at rounding level mean an exact fit; the ratio is then noise.
    if (ssr > 1e-24 * sst) {
        report.durbin_watson = durbin_watson(report.residuals);
    }
    return report;
}

double durbin_watson(std::span<const double> residuals) {
    if (residuals.size() < 2) {
        throw DimensionError("Durbin-Watson needs at least two residuals");
    }
    double num = 0.0;
    double den = residuals[0] * residuals[0];
    for (std::size_t t = 1; t < residuals.size(); ++t) {
        const double d = residuals[t] - residuals[t - 1];
        num += d * d;
        den += residuals[t] * residuals[t];
    }
    if (den == 0.0) {
        throw UndefinedStatisticError("Durbin-Watson is undefined for all-zero residuals");
    }
    return num / den;
}

}  // namespace phdnet::stats
