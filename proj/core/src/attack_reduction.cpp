#include "cvqkd/attack_reduction.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvqkd {

namespace {

const Eigen::Matrix2d kId2 = Eigen::Matrix2d::Identity();
const Eigen::Matrix2d kPauliZ = (Eigen::Matrix2d() << 1.0, 0.0, 0.0, -1.0).finished();

/// Moments of one stage: conditional mean, conditional covariance and the
/// covariance averaged over the Gaussian modulation.
struct StageMoments {
    Eigen::VectorXd mean_cond;
    Eigen::MatrixXd cov_cond;
    Eigen::MatrixXd cov_avg;
};

Eigen::MatrixXd block3(const Eigen::Matrix2d& b00, const Eigen::Matrix2d& b01,
                       const Eigen::Matrix2d& b02, const Eigen::Matrix2d& b11,
                       const Eigen::Matrix2d& b12, const Eigen::Matrix2d& b22) {
    Eigen::MatrixXd out(6, 6);
    out.block<2, 2>(0, 0) = b00;
    out.block<2, 2>(0, 2) = b01;
    out.block<2, 2>(0, 4) = b02;
    out.block<2, 2>(2, 0) = b01.transpose();
    out.block<2, 2>(2, 2) = b11;
    out.block<2, 2>(2, 4) = b12;
    out.block<2, 2>(4, 0) = b02.transpose();
    out.block<2, 2>(4, 2) = b12.transpose();
    out.block<2, 2>(4, 4) = b22;
    return out;
}

/// Closed-form moments of stage 0..3 as functions of (mu, nbar, m, alpha).
StageMoments closed_form_stage(int stage, double mu, const SideChannelParams& sc,
                               const Eigen::Vector2d& alpha) {
    const double r = sc.squeezing();
    const double m = sc.m;
    const double msq = m * m;
    const double d = msq + 1.0;
    const double c2r = std::cosh(2.0 * r);
    const double s2r = std::sinh(2.0 * r);
    const double sr = std::sinh(r);

    StageMoments out;
    out.mean_cond = Eigen::VectorXd::Zero(6);

    switch (stage) {
        case 0: {
            out.mean_cond.segment<2>(0) = alpha;
            out.mean_cond.segment<2>(2) = m * alpha;
            out.cov_cond = block3(kId2, Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero(),
                                  c2r * kId2, s2r * kPauliZ, c2r * kId2);
            out.cov_avg = out.cov_cond;
            out.cov_avg.block<2, 2>(0, 0) += mu * kId2;
            out.cov_avg.block<2, 2>(0, 2) += m * mu * kId2;
            out.cov_avg.block<2, 2>(2, 0) += m * mu * kId2;
            out.cov_avg.block<2, 2>(2, 2) += msq * mu * kId2;
            break;
        }
        case 1: {
            const double y1 = s2r / std::sqrt(d);
            out.mean_cond.segment<2>(0) = std::sqrt(d) * alpha;
            out.cov_cond = block3((msq * c2r + 1.0) / d * kId2, 2.0 * m * sr * sr / d * kId2,
                                  m * y1 * kPauliZ, (msq + c2r) / d * kId2, y1 * kPauliZ,
                                  c2r * kId2);
            out.cov_avg = out.cov_cond;
            out.cov_avg.block<2, 2>(0, 0) += d * mu * kId2;  // all modulation rides on mode 0
            break;
        }
        case 2: {
            const double diag = (msq * c2r + 1.0) / d;
            const double y2 = std::numbers::sqrt2 * m * sr * std::sqrt(msq * c2r + msq + 2.0) / d;
            out.mean_cond.segment<2>(0) = std::sqrt(d) * alpha;
            out.cov_cond = block3(diag * kId2, Eigen::Matrix2d::Zero(), y2 * kPauliZ, kId2,
                                  Eigen::Matrix2d::Zero(), diag * kId2);
            out.cov_avg = out.cov_cond;
            out.cov_avg.block<2, 2>(0, 0) += d * mu * kId2;
            break;
        }
        case 3: {
            const ReductionGains gains = reduction_gains(sc);
            out.mean_cond.segment<2>(0) = gains.k1 * alpha;
            out.mean_cond.segment<2>(4) = gains.k2 * (kPauliZ * alpha);
            out.cov_cond = Eigen::MatrixXd::Identity(6, 6);
            // Averaged covariance = identity + mu * outer product of the gains
            // pattern (k1 on mode 0, k2 Z on mode 2).
            out.cov_avg = block3((1.0 + mu * gains.k1 * gains.k1) * kId2, Eigen::Matrix2d::Zero(),
                                 mu * gains.k1 * gains.k2 * kPauliZ, kId2, Eigen::Matrix2d::Zero(),
                                 (1.0 + mu * gains.k2 * gains.k2) * kId2);
            break;
        }
        default:
            throw std::logic_error("closed_form_stage: stage out of range");
    }
    return out;
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

SideChannelParams::SideChannelParams(double nbar_, double m_) : nbar(nbar_), m(m_) {
    if (!(nbar >= 0.0)) {
        throw std::invalid_argument("SideChannelParams: nbar must be >= 0");
    }
    if (!(m >= 0.0)) {
        throw std::invalid_argument("SideChannelParams: m must be >= 0");
    }
}

double SideChannelParams::squeezing() const { return std::asinh(std::sqrt(nbar)); }

double k_factor(const SideChannelParams& sc) {
    return std::sqrt(sc.m * sc.m * (2.0 * sc.nbar + 1.0) + 1.0);
}

EffectiveParams effective_params(double mu, double eta, double eps, const SideChannelParams& sc) {
    if (!(mu >= 0.0)) {
        throw std::invalid_argument("effective_params: mu must be >= 0");
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("effective_params: eta must lie in (0, 1]");
    }
    if (!(eps >= 0.0)) {
        throw std::invalid_argument("effective_params: eps must be >= 0");
    }
    const double k = k_factor(sc);
    const double ksq = k * k;
    return {k, ksq * mu, eta / ksq, ksq * eps};
}

ReductionGains reduction_gains(const SideChannelParams& sc) {
    const double r = sc.squeezing();
    const double msq = sc.m * sc.m;
    return {std::sqrt(0.5 * (msq * std::cosh(2.0 * r) + msq + 2.0)), -sc.m * std::sinh(r)};
}

EffectiveParams effective_params_from_gains(double mu, double eta, double eps, double k1,
                                            double k2) {
    if (!(mu >= 0.0)) {
        throw std::invalid_argument("effective_params_from_gains: mu must be >= 0");
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("effective_params_from_gains: eta must lie in (0, 1]");
    }
    if (!(eps >= 0.0)) {
        throw std::invalid_argument("effective_params_from_gains: eps must be >= 0");
    }
    const double ksq = k1 * k1 + k2 * k2;
    return {std::sqrt(ksq), ksq * mu, eta / ksq, ksq * eps};
}

CircuitParams circuit_params(const SideChannelParams& sc) {
    const double r = sc.squeezing();
    const double msq = sc.m * sc.m;
    CircuitParams p;
    p.theta1 = std::acos(1.0 / std::sqrt(msq + 1.0));
    p.r2 = -std::asinh(std::numbers::sqrt2 * std::sinh(r) /
                       std::sqrt(msq * std::cosh(2.0 * r) + msq + 2.0));
    p.r3 = -std::asinh(sc.m * std::sinh(r) / std::sqrt(msq + 1.0));
    return p;
}

GaussianState build_initial_state(double mu, const SideChannelParams& sc) {
    if (!(mu >= 0.0)) {
        throw std::invalid_argument("build_initial_state: mu must be >= 0");
    }
    GaussianState state = build_conditional_state(Eigen::Vector2d::Zero(), sc);
    // Averaging over the modulation: alpha has per-quadrature variance mu, the
    // signal is displaced by alpha and the side channel by m alpha.
    const double pattern[3] = {1.0, sc.m, 0.0};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            state.cov.block<2, 2>(2 * i, 2 * j) += mu * pattern[i] * pattern[j] * kId2;
        }
    }
    return state;
}

GaussianState build_conditional_state(const Eigen::Vector2d& alpha, const SideChannelParams& sc) {
    GaussianState state = tensor(vacuum(1), tmsv(sc.squeezing()));
    state = displace(std::move(state), 0, alpha);
    state = displace(std::move(state), 1, sc.m * alpha);
    return state;
}

std::array<SymplecticTransform, 3> reduction_circuit(const SideChannelParams& sc) {
    const CircuitParams p = circuit_params(sc);
    return {beamsplitter(p.theta1, 0, 1, 3), two_mode_squeezer(p.r2, 1, 2, 3),
            two_mode_squeezer(p.r3, 0, 2, 3)};
}

double StageDeviation::max() const {
    return std::max(mean_conditional, std::max(cov_conditional, cov_averaged));
}

double ReductionReport::max_deviation() const {
    double worst = 0.0;
    for (const auto& s : stage) {
        worst = std::max(worst, s.max());
    }
    return worst;
}

bool ReductionReport::passed(double tol) const { return max_deviation() < tol; }

ReductionReport verify_reduction(double mu, const SideChannelParams& sc,
                                 const Eigen::Vector2d& alpha) {
    if (!(mu >= 0.0)) {
        throw std::invalid_argument("verify_reduction: mu must be >= 0");
    }

    ReductionReport report;
    report.params = circuit_params(sc);

    GaussianState cond = build_conditional_state(alpha, sc);
    GaussianState avg = build_initial_state(mu, sc);
    const auto circuit = reduction_circuit(sc);

    for (int stage = 0; stage <= 3; ++stage) {
        if (stage > 0) {
            cond = apply(circuit[static_cast<std::size_t>(stage - 1)], cond);
            avg = apply(circuit[static_cast<std::size_t>(stage - 1)], avg);
        }
        const StageMoments form = closed_form_stage(stage, mu, sc, alpha);
        StageDeviation dev;
        dev.mean_conditional = (cond.mean - form.mean_cond).cwiseAbs().maxCoeff();
        dev.cov_conditional = max_abs_diff(cond.cov, form.cov_cond);
        // The averaged state keeps zero mean throughout; fold that check in here.
        dev.cov_averaged = std::max(max_abs_diff(avg.cov, form.cov_avg),
                                    avg.mean.cwiseAbs().maxCoeff());
        report.stage[static_cast<std::size_t>(stage)] = dev;
    }
    return report;
}

std::array<double, 3> closed_form_psi0_eigenvalues(double mu, double nbar) {
    if (!(mu >= 0.0)) {
        throw std::invalid_argument("closed_form_psi0_eigenvalues: mu must be >= 0");
    }
    if (!(nbar >= 0.0)) {
        throw std::invalid_argument("closed_form_psi0_eigenvalues: nbar must be >= 0");
    }
    const double cosh2r = 2.0 * nbar + 1.0;
    const double s = std::sqrt(1.0 + mu + mu * mu + mu * cosh2r);
    return {1.0, mu + s, -mu + s};
}

}  // namespace cvqkd
