#include "cvqkd/simulation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cvqkd/errors.hpp"

namespace cvqkd {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

/// Per-quadrature second moments of one (alpha, beta) pair stream.
struct QuadratureStats {
    double var_alpha;
    double var_beta;
    double cov;
};

QuadratureStats second_moments(const std::vector<SessionSample>& samples, bool x_quadrature) {
    const double n = static_cast<double>(samples.size());
    double mean_a = 0.0, mean_b = 0.0;
    for (const auto& s : samples) {
        mean_a += x_quadrature ? s.alpha_x : s.alpha_p;
        mean_b += x_quadrature ? s.beta_x : s.beta_p;
    }
    mean_a /= n;
    mean_b /= n;

    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (const auto& s : samples) {
        const double da = (x_quadrature ? s.alpha_x : s.alpha_p) - mean_a;
        const double db = (x_quadrature ? s.beta_x : s.beta_p) - mean_b;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    const double denom = n - 1.0;
    return {saa / denom, sbb / denom, sab / denom};
}

}  // namespace

Xoshiro256PlusPlus::Xoshiro256PlusPlus(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) {
        word = splitmix64(sm);
    }
}

std::uint64_t Xoshiro256PlusPlus::next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Xoshiro256PlusPlus::uniform() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

std::pair<double, double> Xoshiro256PlusPlus::normal_pair() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::vector<SessionSample> sample_session(double mu, const ChannelParams& ch, std::size_t n,
                                          std::uint64_t seed) {
    if (!(mu > 0.0)) {
        throw std::invalid_argument("sample_session: mu must be positive");
    }
    if (n == 0) {
        throw std::invalid_argument("sample_session: need at least one sample");
    }

    Xoshiro256PlusPlus rng(seed);
    const double alpha_sd = std::sqrt(0.5 * mu);
    const double noise_sd = std::sqrt(0.5 * (ch.eta * ch.eps + 2.0));
    const double gain = std::sqrt(ch.eta);

    std::vector<SessionSample> samples;
    samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [ga_x, ga_p] = rng.normal_pair();
        const auto [gz_x, gz_p] = rng.normal_pair();
        SessionSample s;
        s.alpha_x = alpha_sd * ga_x;
        s.alpha_p = alpha_sd * ga_p;
        s.beta_x = gain * s.alpha_x + noise_sd * gz_x;
        s.beta_p = gain * s.alpha_p + noise_sd * gz_p;
        samples.push_back(s);
    }
    return samples;
}

ChannelEstimate estimate_channel(const std::vector<SessionSample>& samples, double mu) {
    if (samples.size() < 100) {
        throw std::invalid_argument("estimate_channel: need at least 100 samples");
    }
    if (!(mu > 0.0)) {
        throw std::invalid_argument("estimate_channel: mu must be positive");
    }
    const double n = static_cast<double>(samples.size());

    const QuadratureStats qx = second_moments(samples, true);
    const QuadratureStats qp = second_moments(samples, false);
    if (!(qx.var_alpha > 0.0) || !(qp.var_alpha > 0.0)) {
        throw estimation_error("estimate_channel: degenerate modulation variance");
    }

    // Per-quadrature regression beta = slope * alpha + residual.
    const double slope_x = qx.cov / qx.var_alpha;
    const double slope_p = qp.cov / qp.var_alpha;
    const double resid_x = qx.var_beta - qx.cov * qx.cov / qx.var_alpha;
    const double resid_p = qp.var_beta - qp.cov * qp.cov / qp.var_alpha;
    if (!(resid_x > 0.0) || !(resid_p > 0.0)) {
        throw estimation_error("estimate_channel: degenerate residual variance");
    }

    const double slope = 0.5 * (slope_x + slope_p);
    const double resid = 0.5 * (resid_x + resid_p);

    ChannelEstimate est;
    est.sample_count = samples.size();
    est.eta_hat = slope * slope;
    if (!(est.eta_hat > 0.0)) {
        throw estimation_error("estimate_channel: vanishing channel gain estimate");
    }
    // Var(beta_q | alpha) = (eta eps + 2) / 2 inverted for eps.
    est.eps_hat = (2.0 * resid - 2.0) / est.eta_hat;
    // Gaussian mutual information, half a bit per quadrature per factor two in
    // the variance ratio.
    est.i_ab_hat = 0.5 * (std::log2(qx.var_beta / resid_x) + std::log2(qp.var_beta / resid_p));

    // Standard errors via the delta method.
    const double se_slope_x = std::sqrt(resid_x / (n * qx.var_alpha));
    const double se_slope_p = std::sqrt(resid_p / (n * qp.var_alpha));
    const double se_slope = 0.5 * std::sqrt(se_slope_x * se_slope_x + se_slope_p * se_slope_p);
    est.se_eta = 2.0 * std::abs(slope) * se_slope;

    const double se_resid_x = resid_x * std::sqrt(2.0 / (n - 1.0));
    const double se_resid_p = resid_p * std::sqrt(2.0 / (n - 1.0));
    const double se_resid = 0.5 * std::sqrt(se_resid_x * se_resid_x + se_resid_p * se_resid_p);
    est.se_eps = std::hypot(2.0 * se_resid / est.eta_hat, est.eps_hat / est.eta_hat * est.se_eta);

    // i_ab per quadrature is (1/2) log2(1 + T) with T the signal-to-noise
    // ratio; relVar(T) = 4/(nT) + 4/n.
    double var_mi = 0.0;
    for (const double t : {qx.var_beta / resid_x - 1.0, qp.var_beta / resid_p - 1.0}) {
        const double sd_t = t * std::sqrt(4.0 / (n * t) + 4.0 / n);
        const double se_q = 0.5 * std::numbers::log2e * sd_t / (1.0 + t);
        var_mi += se_q * se_q;
    }
    est.se_i_ab = std::sqrt(var_mi);
    return est;
}

}  // namespace cvqkd
