#pragma once

#include <variant>

namespace phdnet::stats {

struct StudentT {
    double df;
};

struct FisherF {
    double d1;
    double d2;
};

using Distribution = std::variant<StudentT, FisherF>;

/// P(X > statistic). Throws DomainError for non-positive degrees of freedom.
double tail_probability(double statistic, const Distribution& distribution);

/// 2 * P(T > |t|), clamped to [0, 1].
double two_sided_p(double t, double df);

}  // namespace phdnet::stats
