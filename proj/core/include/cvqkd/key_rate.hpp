#pragma once

#include "cvqkd/attack_reduction.hpp"
#include "cvqkd/gaussian.hpp"

namespace cvqkd {

/// Thermal-loss channel in shot-noise units: transmittance eta in (0, 1] and
/// excess noise eps >= 0 referred to the channel input.
struct ChannelParams {
    ChannelParams(double eta, double eps);

    double eta;
    double eps;
};

struct KeyRateBreakdown {
    double i_ab;       ///< Alice-Bob mutual information, bits per use
    double holevo_eb;  ///< Holevo bound on Eve-Bob information, bits per use
    double rate;       ///< i_ab - holevo_eb; negative means no key
    EffectiveParams eff;
};

/// Two-mode covariance of the entanglement-based Alice-Bob state for the
/// effective parameters: blocks (mu'+1) 1 and (eta'(mu'+eps')+1) 1 coupled by
/// sqrt(eta' mu' (mu'+2)) Z. Zero mean.
GaussianState vab_covariance(const EffectiveParams& eff);

struct AsymptoticEigenvalues {
    double v_ab1;     ///< 1 + eps' eta' / (1 - eta')
    double v_ab2;     ///< mu' (1 - eta')
    double v_a_beta;  ///< 2/eta' + eps' - 1
};

/// Large-mu limits of the symplectic eigenvalues entering the Holevo bound.
/// Requires eta_eff strictly below 1.
AsymptoticEigenvalues asymptotic_eigenvalues(const EffectiveParams& eff);

/// I(alpha:beta) in bits: log2((eta' mu' + eta' eps' + 2) / (eta' eps' + 2)),
/// or its large-mu limit log2(eta' mu' / (eta' eps' + 2)).
double mutual_info_ab(const EffectiveParams& eff, bool asymptotic);

/// Holevo bound I(E:beta) in bits. The finite path computes
/// S(rho_AB) - S(rho_A|beta) from vab_covariance and heterodyne conditioning;
/// the asymptotic path is log2(e v_ab2 / 2) + g(v_ab1) - g(v_a_beta).
double holevo_eb(const EffectiveParams& eff, bool asymptotic);

/// Asymptotic (mu -> infinity) reverse-reconciliation key rate. The rate does
/// not depend on mu; a positive mu is still required for interface uniformity.
KeyRateBreakdown key_rate_asymptotic(const ChannelParams& ch, double mu, const SideChannelParams& sc);

/// Finite-modulation key rate; approaches key_rate_asymptotic as mu grows.
KeyRateBreakdown key_rate_finite(const ChannelParams& ch, double mu, const SideChannelParams& sc);

/// Pure-loss (eps = 0) asymptotic rate: -log2(1 - eta') / eta' - log2(e) with
/// eta' = eta / k^2. Positive for every eta in (0, 1) and every side channel.
double key_rate_lossy(double eta, const SideChannelParams& sc);

/// Long-distance linearization eta / (4 (nbar + 1) ln 2); stated for m = 1
/// only, other gains are rejected.
double key_rate_longdistance(double eta, const SideChannelParams& sc);

/// Repeaterless secret-key capacity of the lossy channel: -log2(1 - eta).
double plob_bound(double eta);

}  // namespace cvqkd
