#pragma once

#include <vector>

#include "cvqkd/attack_reduction.hpp"

namespace cvqkd {

struct ThresholdPoint {
    double eta;
    double eta_db;   ///< transmission in dB, -10 log10(eta)
    double eps_max;  ///< 0 when flagged
    SideChannelParams sc;
    bool no_threshold;  ///< true when no root could be found at this point
};

/// Largest tolerable excess noise: the root of eps -> K_asymptotic(eta, eps),
/// found by bisection on [0, eps_hi] after growing eps_hi by doubling from 1
/// until the rate turns negative. Returns 0 if the rate is already
/// non-positive at eps = 0. Deterministic: identical inputs give bit-identical
/// results.
double epsilon_max(double eta, const SideChannelParams& sc, double tol = 1e-10);

/// epsilon_max over a grid, order preserved. Per-point failures are flagged
/// in the output instead of aborting the sweep. Points are independent and
/// may be evaluated in parallel by callers.
std::vector<ThresholdPoint> threshold_curve(const std::vector<double>& eta_grid,
                                            const SideChannelParams& sc, double tol = 1e-10);

}  // namespace cvqkd
