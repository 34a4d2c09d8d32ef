#include "cvqkd/threshold.hpp"

#include <cmath>
#include <stdexcept>

#include "cvqkd/errors.hpp"
#include "cvqkd/key_rate.hpp"

namespace cvqkd {

double epsilon_max(double eta, const SideChannelParams& sc, double tol) {
    if (!(eta > 0.0 && eta < 1.0)) {
        throw std::invalid_argument("epsilon_max: eta must lie in (0, 1)");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("epsilon_max: tol must be positive");
    }

    // The asymptotic rate does not depend on mu; any positive value works.
    const auto rate_at = [&](double eps) {
        return key_rate_asymptotic(ChannelParams(eta, eps), 1.0, sc).rate;
    };

    if (rate_at(0.0) <= 0.0) {
        return 0.0;
    }

    // Grow the bracket until the rate changes sign. K is monotone decreasing
    // in eps in every observed regime (asserted by the property tests).
    double hi = 1.0;
    int doublings = 0;
    while (rate_at(hi) > 0.0) {
        hi *= 2.0;
        if (++doublings > 60) {
            throw no_threshold_error("epsilon_max: no sign change after 60 doublings");
        }
    }

    double lo = 0.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (rate_at(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<ThresholdPoint> threshold_curve(const std::vector<double>& eta_grid,
                                            const SideChannelParams& sc, double tol) {
    std::vector<ThresholdPoint> points;
    points.reserve(eta_grid.size());
    for (double eta : eta_grid) {
        ThresholdPoint pt{eta, -10.0 * std::log10(eta), 0.0, sc, false};
        try {
            pt.eps_max = epsilon_max(eta, sc, tol);
        } catch (const std::invalid_argument&) {
            pt.no_threshold = true;
        } catch (const std::domain_error&) {
            pt.no_threshold = true;
        }
        points.push_back(pt);
    }
    return points;
}

}  // namespace cvqkd
