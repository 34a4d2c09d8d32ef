#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cvqkd/gaussian.hpp"
#include "cvqkd/simulation.hpp"

namespace cvqkd::test {

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

/// Single-mode thermal state with quadrature variance nu >= 1.
inline GaussianState thermal(double nu) {
    GaussianState s = vacuum(1);
    s.cov *= nu;
    return s;
}

/// Random composition of beamsplitters and two-mode squeezers. A single mode
/// admits only the identity here.
inline SymplecticTransform random_symplectic(Xoshiro256PlusPlus& rng, int num_modes) {
    SymplecticTransform total{Eigen::MatrixXd::Identity(2 * num_modes, 2 * num_modes)};
    if (num_modes < 2) return total;
    const int elements = 4;
    for (int i = 0; i < elements; ++i) {
        const int a = static_cast<int>(rng.next() % static_cast<std::uint64_t>(num_modes));
        int b = static_cast<int>(rng.next() % static_cast<std::uint64_t>(num_modes));
        if (b == a) b = (a + 1) % num_modes;
        if (rng.uniform() < 0.5) {
            const double theta = 2.0 * 3.14159265358979323846 * rng.uniform();
            total.matrix = beamsplitter(theta, a, b, num_modes).matrix * total.matrix;
        } else {
            const double r = 1.5 * (rng.uniform() - 0.5);
            total.matrix = two_mode_squeezer(r, a, b, num_modes).matrix * total.matrix;
        }
    }
    return total;
}

/// Random valid state: thermal modes pushed through a random symplectic
/// circuit and displaced. Valid by construction.
inline GaussianState random_state(Xoshiro256PlusPlus& rng, int num_modes) {
    GaussianState state = vacuum(num_modes);
    for (int mode = 0; mode < num_modes; ++mode) {
        const double nu = 1.0 + 3.0 * rng.uniform();
        state.cov.block<2, 2>(2 * mode, 2 * mode) = nu * Eigen::Matrix2d::Identity();
        state.mean.segment<2>(2 * mode) =
            Eigen::Vector2d(rng.normal_pair().first, rng.normal_pair().second);
    }
    return apply(random_symplectic(rng, num_modes), state);
}

}  // namespace cvqkd::test
