#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "cvqkd/key_rate.hpp"

namespace cvqkd {

/// xoshiro256++ with splitmix64 seed expansion. The integer stream is fully
/// pinned by the constants in the implementation, so a seeded run reproduces
/// bit-identically across runs and can be re-implemented in other languages.
/// Normals come from Box-Muller; one pair consumes exactly two uniforms.
///
/// Parallel use: derive per-stream seeds as seed_i = base_seed + i and treat
/// each stream as independent.
class Xoshiro256PlusPlus {
public:
    explicit Xoshiro256PlusPlus(std::uint64_t seed);

    std::uint64_t next();

    /// 53-bit uniform on (0, 1]; never 0, so log(u) stays finite.
    double uniform();

    /// Two independent standard normals.
    std::pair<double, double> normal_pair();

private:
    std::array<std::uint64_t, 4> state_;
};

/// One prepare-and-measure round: Alice's modulation variable and Bob's
/// heterodyne outcome, one value per quadrature.
struct SessionSample {
    double alpha_x, alpha_p;
    double beta_x, beta_p;
};

struct ChannelEstimate {
    double eta_hat;
    double eps_hat;
    double i_ab_hat;  ///< bits
    double se_eta;
    double se_eps;
    double se_i_ab;
    std::size_t sample_count;
};

/// Simulates n rounds: alpha_q ~ N(0, mu/2) and
/// beta_q = sqrt(eta) alpha_q + z_q with z_q ~ N(0, (eta eps + 2)/2), i.e.
/// the conditional outcome variance is (V_B|alpha + 1)/2 in shot-noise units.
/// Each round draws (alpha_x, alpha_p) then (z_x, z_p), so the stream layout
/// is fixed. Deterministic for a fixed seed. Eve's tap never disturbs these
/// marginal statistics, so the sampler depends only on (mu, eta, eps).
std::vector<SessionSample> sample_session(double mu, const ChannelParams& ch, std::size_t n,
                                          std::uint64_t seed);

/// Pooled regression estimate of eta, residual-variance estimate of eps and
/// the Gaussian mutual-information estimate, with delta-method standard
/// errors. Requires at least 100 samples.
ChannelEstimate estimate_channel(const std::vector<SessionSample>& samples, double mu);

}  // namespace cvqkd
