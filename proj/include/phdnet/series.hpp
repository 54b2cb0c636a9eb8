#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace phdnet::stats {

/// Mean over each sliding window; output length is len - window + 1.
std::vector<double> moving_average(std::span<const double> series, std::size_t window);

/// Least-squares slope of `series` against its index 0, 1, 2, ...
double index_slope(std::span<const double> series);

/// Slope of the moving-average-smoothed slice scores; constant input gives
/// exactly 0. Throws DimensionError if fewer than two smoothed points remain.
double trend_statistic(std::span<const double> scores_by_slice, std::size_t window);

}  // namespace phdnet::stats
