#include "phdnet/distributions.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "phdnet/error.hpp"

namespace phdnet::stats {

namespace {

void require_dof(double dof, const char* name) {
    if (!(dof > 0.0) || !std::isfinite(dof)) {
        throw DomainError(std::string(name) + " must be a positive, finite number of degrees of freedom");
    }
}

struct Tail {
    double statistic;

    double operator()(const StudentT& d) const {
        require_dof(d.df, "df");
        if (std::isnan(statistic)) {
            throw DomainError("t statistic is NaN");
        }
        if (std::isinf(statistic)) {
            return statistic > 0 ? 0.0 : 1.0;
        }
        return boost::math::cdf(boost::math::complement(boost::math::students_t(d.df), statistic));
    }

    double operator()(const FisherF& d) const {
        require_dof(d.d1, "d1");
        require_dof(d.d2, "d2");
        if (std::isnan(statistic)) {
            throw DomainError("F statistic is NaN");
        }
        if (statistic <= 0.0) {
            return 1.0;
        }
        if (std::isinf(statistic)) {
            return 0.0;
        }
        return boost::math::cdf(boost::math::complement(boost::math::fisher_f(d.d1, d.d2), statistic));
    }
};

}  // namespace

double tail_probability(double statistic, const Distribution& distribution) {
    return std::clamp(std::visit(Tail{statistic}, distribution), 0.0, 1.0);
}

double two_sided_p(double t, double df) {
    return std::min(1.0, 2.0 * tail_probability(std::abs(t), StudentT{df}));
}

}  // namespace phdnet::stats
