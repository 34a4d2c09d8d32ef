#include "cvqkd/key_rate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cvqkd/errors.hpp"

namespace cvqkd {

namespace {

const Eigen::Matrix2d kPauliZ = (Eigen::Matrix2d() << 1.0, 0.0, 0.0, -1.0).finished();

}  // namespace

ChannelParams::ChannelParams(double eta_, double eps_) : eta(eta_), eps(eps_) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("ChannelParams: eta must lie in (0, 1]");
    }
    if (!(eps >= 0.0)) {
        throw std::invalid_argument("ChannelParams: eps must be >= 0");
    }
}

GaussianState vab_covariance(const EffectiveParams& eff) {
    if (!(eff.mu_eff > 0.0)) {
        throw std::invalid_argument("vab_covariance: mu_eff must be positive");
    }
    if (!(eff.eta_eff > 0.0 && eff.eta_eff <= 1.0)) {
        throw std::invalid_argument("vab_covariance: eta_eff must lie in (0, 1]");
    }
    const double a = eff.mu_eff + 1.0;
    const double b = eff.eta_eff * (eff.mu_eff + eff.eps_eff) + 1.0;
    const double c = std::sqrt(eff.eta_eff * eff.mu_eff * (eff.mu_eff + 2.0));

    GaussianState state{Eigen::VectorXd::Zero(4), Eigen::MatrixXd::Identity(4, 4)};
    state.cov.block<2, 2>(0, 0) = a * Eigen::Matrix2d::Identity();
    state.cov.block<2, 2>(2, 2) = b * Eigen::Matrix2d::Identity();
    state.cov.block<2, 2>(0, 2) = c * kPauliZ;
    state.cov.block<2, 2>(2, 0) = c * kPauliZ;
    return state;
}

AsymptoticEigenvalues asymptotic_eigenvalues(const EffectiveParams& eff) {
    if (!(eff.eta_eff > 0.0)) {
        throw std::invalid_argument("asymptotic_eigenvalues: eta_eff must be positive");
    }
    if (eff.eta_eff >= 1.0) {
        throw singular_channel_error(
            "asymptotic_eigenvalues: eta_eff >= 1 makes 1/(1 - eta_eff) diverge");
    }
    AsymptoticEigenvalues v;
    v.v_ab1 = 1.0 + eff.eps_eff * eff.eta_eff / (1.0 - eff.eta_eff);
    v.v_ab2 = eff.mu_eff * (1.0 - eff.eta_eff);
    v.v_a_beta = 2.0 / eff.eta_eff + eff.eps_eff - 1.0;
    return v;
}

double mutual_info_ab(const EffectiveParams& eff, bool asymptotic) {
    if (!(eff.mu_eff > 0.0)) {
        throw std::invalid_argument("mutual_info_ab: mu_eff must be positive");
    }
    const double signal = eff.eta_eff * eff.mu_eff;
    const double noise = eff.eta_eff * eff.eps_eff + 2.0;
    return asymptotic ? std::log2(signal / noise) : std::log2((signal + noise) / noise);
}

double holevo_eb(const EffectiveParams& eff, bool asymptotic) {
    if (asymptotic) {
        const AsymptoticEigenvalues v = asymptotic_eigenvalues(eff);
        return std::log2(0.5 * std::numbers::e * v.v_ab2) + entropy_g(v.v_ab1) -
               entropy_g(v.v_a_beta);
    }
    // rho_ABE and rho_AE|beta are pure, so S(E) = S(AB) and S(E|beta) = S(A|beta).
    const GaussianState ab = vab_covariance(eff);
    const GaussianState a_given_b = heterodyne_condition(ab, 1);
    return entropy(ab) - entropy(a_given_b);
}

KeyRateBreakdown key_rate_asymptotic(const ChannelParams& ch, double mu,
                                     const SideChannelParams& sc) {
    if (!(mu > 0.0)) {
        throw std::invalid_argument("key_rate_asymptotic: mu must be positive");
    }
    const EffectiveParams eff = effective_params(mu, ch.eta, ch.eps, sc);
    if (eff.eta_eff >= 1.0) {
        throw singular_channel_error("key_rate_asymptotic: effective transmittance reached 1");
    }
    KeyRateBreakdown out;
    out.eff = eff;
    out.i_ab = mutual_info_ab(eff, /*asymptotic=*/true);
    out.holevo_eb = holevo_eb(eff, /*asymptotic=*/true);
    out.rate = out.i_ab - out.holevo_eb;  // the mu' terms cancel in the difference
    return out;
}

KeyRateBreakdown key_rate_finite(const ChannelParams& ch, double mu, const SideChannelParams& sc) {
    if (!(mu > 0.0)) {
        throw std::invalid_argument("key_rate_finite: mu must be positive");
    }
    const EffectiveParams eff = effective_params(mu, ch.eta, ch.eps, sc);
    KeyRateBreakdown out;
    out.eff = eff;
    out.i_ab = mutual_info_ab(eff, /*asymptotic=*/false);
    out.holevo_eb = holevo_eb(eff, /*asymptotic=*/false);
    out.rate = out.i_ab - out.holevo_eb;
    return out;
}

double key_rate_lossy(double eta, const SideChannelParams& sc) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("key_rate_lossy: eta must lie in (0, 1]");
    }
    const double k = k_factor(sc);
    const double eta_eff = eta / (k * k);
    if (eta_eff >= 1.0) {
        throw singular_channel_error("key_rate_lossy: effective transmittance reached 1");
    }
    return -std::log2(1.0 - eta_eff) / eta_eff - std::numbers::log2e;
}

double key_rate_longdistance(double eta, const SideChannelParams& sc) {
    if (sc.m != 1.0) {
        throw std::invalid_argument("key_rate_longdistance: stated for unit side-channel gain only");
    }
    return eta / (4.0 * (sc.nbar + 1.0) * std::numbers::ln2);
}

double plob_bound(double eta) {
    if (!(eta > 0.0)) {
        throw std::invalid_argument("plob_bound: eta must be positive");
    }
    if (eta >= 1.0) {
        throw infinite_capacity_error("plob_bound: capacity diverges at unit transmittance");
    }
    return -std::log2(1.0 - eta);
}

}  // namespace cvqkd
