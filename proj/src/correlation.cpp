#include "phdnet/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phdnet/distributions.hpp"
#include "phdnet/error.hpp"

namespace phdnet::stats {

CorrelationReport pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw DimensionError("pearson inputs differ in length");
    }
    const std::size_t n = x.size();
    if (n < 3) {
        throw DimensionError("pearson needs at least 3 observations, got " + std::to_string(n));
    }
    // Extended precision keeps r of an exactly affine pair at exactly +-1
    // after rounding back to double.
    using wide = long double;
    wide mx = 0.0L;
    wide my = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<wide>(n);
    my /= static_cast<wide>(n);
    wide sxx = 0.0L;
    wide syy = 0.0L;
    wide sxy = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const wide dx = x[i] - mx;
        const wide dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0L || syy == 0.0L) {
        throw UndefinedStatisticError("correlation is undefined for a constant series");
    }

    CorrelationReport out;
    out.n = n;
    out.r = std::clamp(static_cast<double>(sxy / std::sqrt(sxx * syy)), -1.0, 1.0);
    const double dof = static_cast<double>(n - 2);
    const double one_minus = 1.0 - out.r * out.r;
    out.t = one_minus > 0.0 ? out.r * std::sqrt(dof / one_minus)
                            : std::copysign(std::numeric_limits<double>::infinity(), out.r);
    out.p = two_sided_p(out.t, dof);
    return out;
}

}  // namespace phdnet::stats
