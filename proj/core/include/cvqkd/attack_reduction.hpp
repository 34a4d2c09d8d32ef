#pragma once

#include <Eigen/Dense>

#include <array>

#include "cvqkd/gaussian.hpp"

namespace cvqkd {

/// Trojan-horse side channel: one arm of a TMSV state with mean photon number
/// nbar enters the sender's modulator and picks up a displacement of m alpha
/// when the signal picks up alpha.
struct SideChannelParams {
    SideChannelParams(double nbar, double m);

    double nbar;  ///< mean injected photon number, >= 0
    double m;     ///< side-channel modulation gain, >= 0

    /// TMSV squeezing r with sinh^2(r) = nbar.
    double squeezing() const;
};

/// Parameters of the side-channel-free attack with identical observable
/// statistics: modulation k^2 mu, transmittance eta / k^2, noise k^2 eps.
struct EffectiveParams {
    double k;        ///< sqrt(m^2 (2 nbar + 1) + 1), >= 1
    double mu_eff;
    double eta_eff;
    double eps_eff;
};

/// k = sqrt(m^2 (2 nbar + 1) + 1); at m = 1 this is sqrt(2 (nbar + 1)).
double k_factor(const SideChannelParams& sc);

/// Rescales (mu, eta, eps) by the side-channel factor k.
EffectiveParams effective_params(double mu, double eta, double eps, const SideChannelParams& sc);

/// Displacement gains of the reduced source: the signal mode carries k1 alpha
/// and the residual side-channel mode carries k2 Z alpha, with
/// k1^2 + k2^2 = k^2. Every rate depends on k2 only through its square, so
/// its sign never matters downstream.
struct ReductionGains {
    double k1;
    double k2;
};
ReductionGains reduction_gains(const SideChannelParams& sc);

/// effective_params from explicit gains; exposes the sign-of-k2 equivalence.
EffectiveParams effective_params_from_gains(double mu, double eta, double eps, double k1, double k2);

/// Angles of the three-element reduction circuit.
struct CircuitParams {
    double theta1;  ///< beamsplitter angle, arccos(1/sqrt(m^2+1))
    double r2;      ///< squeezer purifying the side-channel pair
    double r3;      ///< squeezer removing the residual two-mode squeezing
};
CircuitParams circuit_params(const SideChannelParams& sc);

/// Three-mode averaged source state (signal, side channel, idler) with
/// Gaussian modulation of per-quadrature variance mu on the first two modes.
GaussianState build_initial_state(double mu, const SideChannelParams& sc);

/// Source state for a fixed displacement: mean (alpha, m alpha, 0).
GaussianState build_conditional_state(const Eigen::Vector2d& alpha, const SideChannelParams& sc);

/// [BS(theta1) on modes 0-1, Sq(r2) on modes 1-2, Sq(r3) on modes 0-2].
/// Composed, it maps the source state to displaced vacua: signal displaced by
/// k1 alpha, a bare vacuum in mode 1 and a mode displaced by k2 Z alpha.
std::array<SymplecticTransform, 3> reduction_circuit(const SideChannelParams& sc);

/// Largest absolute elementwise deviation of one propagated stage from its
/// closed form, split by moment.
struct StageDeviation {
    double mean_conditional;
    double cov_conditional;
    double cov_averaged;

    double max() const;
};

struct ReductionReport {
    CircuitParams params;
    std::array<StageDeviation, 4> stage;  ///< 0 = source state, 1..3 = after each element

    double max_deviation() const;
    bool passed(double tol = 1e-10) const;
};

/// Propagates conditional and averaged moments through the circuit and checks
/// every stage against its closed form.
ReductionReport verify_reduction(double mu, const SideChannelParams& sc, const Eigen::Vector2d& alpha);

/// Symplectic spectrum (v1, v2, v3) of the averaged source state at m = 1:
/// v1 = 1, v2 = mu + s, v3 = -mu + s with s = sqrt(1 + mu + mu^2 + mu cosh 2r).
std::array<double, 3> closed_form_psi0_eigenvalues(double mu, double nbar);

}  // namespace cvqkd
