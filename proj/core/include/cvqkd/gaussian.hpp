#pragma once

#include <Eigen/Dense>

#include <vector>

namespace cvqkd {

/// N-mode Gaussian state in shot-noise units (vacuum quadrature variance = 1).
/// Quadratures are ordered (x1, p1, x2, p2, ...); the symplectic form is the
/// block-diagonal Omega with [[0, 1], [-1, 0]] per mode.
struct GaussianState {
    Eigen::VectorXd mean;  ///< length 2N
    Eigen::MatrixXd cov;   ///< 2N x 2N, symmetric

    int num_modes() const { return static_cast<int>(mean.size()) / 2; }
};

/// Real linear map M on quadratures with M Omega M^T = Omega.
struct SymplecticTransform {
    Eigen::MatrixXd matrix;  ///< 2N x 2N

    int num_modes() const { return static_cast<int>(matrix.rows()) / 2; }
};

/// Omega for the (x1, p1, x2, p2, ...) ordering.
Eigen::MatrixXd symplectic_form(int num_modes);

/// N-mode vacuum: zero mean, identity covariance.
GaussianState vacuum(int num_modes);

/// Two-mode squeezed vacuum with squeezing r; each arm is thermal with mean
/// photon number sinh^2(r).
GaussianState tmsv(double r);

/// Shift the mean of one mode by alpha = (dx, dp); the covariance is untouched.
GaussianState displace(GaussianState state, int mode, const Eigen::Vector2d& alpha);

/// Product state: concatenated means, block-diagonal covariance.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Gaussian unitary action: mean -> M mean, cov -> M cov M^T.
GaussianState apply(const SymplecticTransform& t, const GaussianState& state);

/// Beamsplitter of angle theta acting on a mode pair as
/// [[cos(theta) 1, sin(theta) 1], [-sin(theta) 1, cos(theta) 1]],
/// identity on every other mode.
SymplecticTransform beamsplitter(double theta, int mode_a, int mode_b, int total_modes);

/// Two-mode squeezer on a mode pair: diagonal blocks cosh(r) 1, off-diagonal
/// blocks sinh(r) Z, identity elsewhere. Applied to a two-mode vacuum it
/// produces tmsv(r).
SymplecticTransform two_mode_squeezer(double r, int mode_a, int mode_b, int total_modes);

/// Restriction to the `keep` modes (order preserved): sub-vector of the mean
/// and principal sub-matrix of the covariance.
GaussianState partial_trace(const GaussianState& state, const std::vector<int>& keep);

/// State of the remaining modes after a heterodyne measurement of one mode:
/// cov -> A - C (B + 1)^-1 C^T with A, B, C the kept/measured/cross blocks.
/// The outcome-dependent mean offset is omitted; only the covariance is
/// consumed downstream.
GaussianState heterodyne_condition(const GaussianState& state, int measured_mode);

/// Symplectic spectrum of a covariance matrix: the N magnitudes of the
/// eigenvalue pairs of i Omega V, descending. Physical states have every
/// value >= 1 up to rounding.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov);

/// Entropy (bits) of a thermal mode with symplectic eigenvalue x:
/// g(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2), with g(1) = 0.
double entropy_g(double x);

/// Von Neumann entropy (bits): sum of g over the symplectic spectrum.
double entropy(const GaussianState& state);

/// max |M Omega M^T - Omega|; zero (to rounding) for a genuine symplectic map.
double symplectic_defect(const SymplecticTransform& t);

/// True when cov is symmetric and every symplectic eigenvalue is >= 1 - tol.
bool is_physical(const GaussianState& state, double tol = 1e-9);

}  // namespace cvqkd
