#include "cvqkd/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace cvqkd {

namespace {

const Eigen::Matrix2d kPauliZ = (Eigen::Matrix2d() << 1.0, 0.0, 0.0, -1.0).finished();

void check_mode(int mode, int num_modes, const char* where) {
    if (mode < 0 || mode >= num_modes) {
        throw std::invalid_argument(std::string(where) + ": mode index out of range");
    }
}

void check_mode_pair(int mode_a, int mode_b, int total_modes, const char* where) {
    if (total_modes < 2) {
        throw std::invalid_argument(std::string(where) + ": need at least two modes");
    }
    check_mode(mode_a, total_modes, where);
    check_mode(mode_b, total_modes, where);
    if (mode_a == mode_b) {
        throw std::invalid_argument(std::string(where) + ": mode indices must be distinct");
    }
}

}  // namespace

Eigen::MatrixXd symplectic_form(int num_modes) {
    if (num_modes < 1) {
        throw std::invalid_argument("symplectic_form: need at least one mode");
    }
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * num_modes, 2 * num_modes);
    for (int k = 0; k < num_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

GaussianState vacuum(int num_modes) {
    if (num_modes < 1) {
        throw std::invalid_argument("vacuum: need at least one mode");
    }
    return {Eigen::VectorXd::Zero(2 * num_modes),
            Eigen::MatrixXd::Identity(2 * num_modes, 2 * num_modes)};
}

GaussianState tmsv(double r) {
    if (!std::isfinite(r)) {
        throw std::invalid_argument("tmsv: squeezing must be finite");
    }
    const double c = std::cosh(2.0 * r);
    const double s = std::sinh(2.0 * r);
    GaussianState state{Eigen::VectorXd::Zero(4), Eigen::MatrixXd::Identity(4, 4)};
    state.cov.block<2, 2>(0, 0) = c * Eigen::Matrix2d::Identity();
    state.cov.block<2, 2>(2, 2) = c * Eigen::Matrix2d::Identity();
    state.cov.block<2, 2>(0, 2) = s * kPauliZ;
    state.cov.block<2, 2>(2, 0) = s * kPauliZ;
    return state;
}

GaussianState displace(GaussianState state, int mode, const Eigen::Vector2d& alpha) {
    check_mode(mode, state.num_modes(), "displace");
    state.mean.segment<2>(2 * mode) += alpha;
    return state;
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
    const auto na = a.mean.size();
    const auto nb = b.mean.size();
    GaussianState out;
    out.mean.resize(na + nb);
    out.mean << a.mean, b.mean;
    out.cov = Eigen::MatrixXd::Zero(na + nb, na + nb);
    out.cov.topLeftCorner(na, na) = a.cov;
    out.cov.bottomRightCorner(nb, nb) = b.cov;
    return out;
}

GaussianState apply(const SymplecticTransform& t, const GaussianState& state) {
    if (t.matrix.rows() != state.mean.size()) {
        throw std::invalid_argument("apply: transform and state dimensions do not match");
    }
    GaussianState out;
    out.mean = t.matrix * state.mean;
    out.cov = t.matrix * state.cov * t.matrix.transpose();
    out.cov = 0.5 * (out.cov + out.cov.transpose().eval());  // keep exact symmetry
    return out;
}

SymplecticTransform beamsplitter(double theta, int mode_a, int mode_b, int total_modes) {
    check_mode_pair(mode_a, mode_b, total_modes, "beamsplitter");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    SymplecticTransform t{Eigen::MatrixXd::Identity(2 * total_modes, 2 * total_modes)};
    t.matrix.block<2, 2>(2 * mode_a, 2 * mode_a) = c * Eigen::Matrix2d::Identity();
    t.matrix.block<2, 2>(2 * mode_a, 2 * mode_b) = s * Eigen::Matrix2d::Identity();
    t.matrix.block<2, 2>(2 * mode_b, 2 * mode_a) = -s * Eigen::Matrix2d::Identity();
    t.matrix.block<2, 2>(2 * mode_b, 2 * mode_b) = c * Eigen::Matrix2d::Identity();
    return t;
}

SymplecticTransform two_mode_squeezer(double r, int mode_a, int mode_b, int total_modes) {
    check_mode_pair(mode_a, mode_b, total_modes, "two_mode_squeezer");
    const double ch = std::cosh(r);
    const double sh = std::sinh(r);
    SymplecticTransform t{Eigen::MatrixXd::Identity(2 * total_modes, 2 * total_modes)};
    t.matrix.block<2, 2>(2 * mode_a, 2 * mode_a) = ch * Eigen::Matrix2d::Identity();
    t.matrix.block<2, 2>(2 * mode_b, 2 * mode_b) = ch * Eigen::Matrix2d::Identity();
    t.matrix.block<2, 2>(2 * mode_a, 2 * mode_b) = sh * kPauliZ;
    t.matrix.block<2, 2>(2 * mode_b, 2 * mode_a) = sh * kPauliZ;
    return t;
}

GaussianState partial_trace(const GaussianState& state, const std::vector<int>& keep) {
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set must not be empty");
    }
    std::vector<bool> seen(static_cast<std::size_t>(state.num_modes()), false);
    for (int mode : keep) {
        check_mode(mode, state.num_modes(), "partial_trace");
        if (seen[static_cast<std::size_t>(mode)]) {
            throw std::invalid_argument("partial_trace: duplicate mode in keep set");
        }
        seen[static_cast<std::size_t>(mode)] = true;
    }
    const int n = static_cast<int>(keep.size());
    GaussianState out{Eigen::VectorXd::Zero(2 * n), Eigen::MatrixXd::Zero(2 * n, 2 * n)};
    for (int i = 0; i < n; ++i) {
        out.mean.segment<2>(2 * i) = state.mean.segment<2>(2 * keep[i]);
        for (int j = 0; j < n; ++j) {
            out.cov.block<2, 2>(2 * i, 2 * j) = state.cov.block<2, 2>(2 * keep[i], 2 * keep[j]);
        }
    }
    return out;
}

GaussianState heterodyne_condition(const GaussianState& state, int measured_mode) {
    if (state.num_modes() < 2) {
        throw std::invalid_argument("heterodyne_condition: need at least two modes");
    }
    check_mode(measured_mode, state.num_modes(), "heterodyne_condition");

    std::vector<int> keep;
    keep.reserve(static_cast<std::size_t>(state.num_modes()) - 1);
    for (int mode = 0; mode < state.num_modes(); ++mode) {
        if (mode != measured_mode) keep.push_back(mode);
    }

    const int n = static_cast<int>(keep.size());
    Eigen::MatrixXd a(2 * n, 2 * n);
    Eigen::MatrixXd c(2 * n, 2);
    for (int i = 0; i < n; ++i) {
        c.block<2, 2>(2 * i, 0) = state.cov.block<2, 2>(2 * keep[i], 2 * measured_mode);
        for (int j = 0; j < n; ++j) {
            a.block<2, 2>(2 * i, 2 * j) = state.cov.block<2, 2>(2 * keep[i], 2 * keep[j]);
        }
    }
    // Heterodyne adds one unit of vacuum noise to the measured mode.
    Eigen::Matrix2d b = state.cov.block<2, 2>(2 * measured_mode, 2 * measured_mode);
    b += Eigen::Matrix2d::Identity();
    if (std::abs(b.determinant()) < 1e-12) {
        throw std::runtime_error("heterodyne_condition: conditioning matrix is not invertible");
    }

    GaussianState out;
    out.mean.resize(2 * n);
    for (int i = 0; i < n; ++i) {
        out.mean.segment<2>(2 * i) = state.mean.segment<2>(2 * keep[i]);
    }
    out.cov = a - c * b.inverse() * c.transpose();
    out.cov = 0.5 * (out.cov + out.cov.transpose().eval());
    return out;
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
    if (cov.rows() != cov.cols() || cov.rows() < 2 || cov.rows() % 2 != 0) {
        throw std::invalid_argument("symplectic_eigenvalues: covariance must be square with even dimension");
    }
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
        throw std::invalid_argument("symplectic_eigenvalues: covariance must be symmetric");
    }
    const int n = static_cast<int>(cov.rows()) / 2;

    // The eigenvalues of Omega V come in pairs (+i nu, -i nu); the spectrum is
    // read off from the moduli, pairing after a descending sort.
    const Eigen::MatrixXd omega_v = symplectic_form(n) * cov;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(omega_v, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symplectic_eigenvalues: eigensolver failed to converge");
    }

    std::vector<double> moduli(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < 2 * n; ++i) {
        moduli[static_cast<std::size_t>(i)] = std::abs(solver.eigenvalues()(i));
    }
    std::sort(moduli.begin(), moduli.end(), std::greater<>());

    std::vector<double> nu(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        nu[static_cast<std::size_t>(k)] =
            0.5 * (moduli[static_cast<std::size_t>(2 * k)] + moduli[static_cast<std::size_t>(2 * k + 1)]);
    }
    return nu;
}

double entropy_g(double x) {
    if (!(x >= 1.0 - 1e-9)) {
        throw std::invalid_argument("entropy_g: argument must be >= 1");
    }
    if (x < 1.0 + 1e-12) {
        return 0.0;  // continuous limit g(1) = 0; avoids log(0)
    }
    const double hi = 0.5 * (x + 1.0);
    const double lo = 0.5 * (x - 1.0);
    return hi * std::log2(hi) - lo * std::log2(lo);
}

double entropy(const GaussianState& state) {
    double total = 0.0;
    for (double nu : symplectic_eigenvalues(state.cov)) {
        total += entropy_g(nu);
    }
    return total;
}

double symplectic_defect(const SymplecticTransform& t) {
    const Eigen::MatrixXd omega = symplectic_form(t.num_modes());
    return (t.matrix * omega * t.matrix.transpose() - omega).cwiseAbs().maxCoeff();
}

bool is_physical(const GaussianState& state, double tol) {
    try {
        const auto nu = symplectic_eigenvalues(state.cov);
        return nu.back() >= 1.0 - tol;  // descending order: back() is the smallest
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace cvqkd
