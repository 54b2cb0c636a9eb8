#pragma once

#include <cstddef>
#include <span>

namespace phdnet::stats {

struct CorrelationReport {
    double r = 0.0;
    std::size_t n = 0;
    double t = 0.0;
    double p = 1.0;  // two-sided, n - 2 degrees of freedom
};

/// Pearson product-moment correlation. Throws DimensionError for mismatched
/// lengths or n < 3 and UndefinedStatisticError when either side is constant.
CorrelationReport pearson(std::span<const double> x, std::span<const double> y);

}  // namespace phdnet::stats
