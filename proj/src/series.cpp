#include "phdnet/series.hpp"

#include <algorithm>
#include <functional>

#include "phdnet/error.hpp"

namespace phdnet::stats {

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
    if (window == 0) {
        throw DimensionError("moving average window must be at least 1");
    }
    if (window > series.size()) {
        throw DimensionError("moving average window " + std::to_string(window) + " exceeds series length " +
                             std::to_string(series.size()));
    }
    std::vector<double> out;
    out.reserve(series.size() - window + 1);
    for (std::size_t start = 0; start + window <= series.size(); ++start) {
        double sum = 0.0;
        for (std::size_t i = start; i < start + window; ++i) {
            sum += series[i];
        }
        out.push_back(sum / static_cast<double>(window));
    }
    return out;
}

double index_slope(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 2) {
        throw DimensionError("slope needs at least two points");
    }
    if (std::adjacent_find(series.begin(), series.end(), std::not_equal_to<>{}) == series.end()) {
        return 0.0;
    }
    const double x_mean = static_cast<double>(n - 1) / 2.0;
    double y_mean = 0.0;
    for (double v : series) {
        y_mean += v;
    }
    y_mean /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - x_mean;
        sxy += dx * (series[i] - y_mean);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

double trend_statistic(std::span<const double> scores_by_slice, std::size_t window) {
    if (scores_by_slice.size() < 2) {
        throw DimensionError("trend needs at least two slices");
    }
    return index_slope(moving_average(scores_by_slice, window));
}

}  // namespace phdnet::stats
