#include "hybridosc/fock.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace hybridosc {

namespace {
constexpr complexd kI{0.0, 1.0};
}

Eigen::Matrix2cd pauli(PauliAxis axis) {
    Eigen::Matrix2cd m;
    switch (axis) {
        case PauliAxis::X:
            m << 0, 1, 1, 0;
            break;
        case PauliAxis::Y:
            m << 0, -kI, kI, 0;
            break;
        case PauliAxis::Z:
            // sigma_z = |1_s><1_s| - |0_s><0_s|
            m << -1, 0, 0, 1;
            break;
    }
    return m;
}

Eigen::Matrix2cd pauli_xy(double gamma) {
    return std::cos(gamma) * pauli(PauliAxis::X) + std::sin(gamma) * pauli(PauliAxis::Y);
}

bool is_hermitian(const Mat& m, double rel_tol) {
    double scale = m.norm();
    if (scale == 0.0) return true;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() < rel_tol * scale;
}

int truncation_band(int n_max) {
    return static_cast<int>(std::ceil(0.1 * n_max));
}

double band_population(const Vec& psi_osc) {
    int n_max = static_cast<int>(psi_osc.size()) - 1;
    int band = truncation_band(n_max);
    return psi_osc.tail(band).squaredNorm();
}

void check_leakage(const Vec& psi_osc, double tol) {
    double pop = band_population(psi_osc);
    if (pop > tol) {
        throw LeakageError("truncation-band population " + std::to_string(pop) +
                           " exceeds tolerance " + std::to_string(tol) + "; raise n_max");
    }
}

Mat annihilation(int n_max) {
    if (n_max < 1) throw DomainError("annihilation: n_max must be >= 1");
    Mat a = Mat::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Mat displacement(complexd alpha, int n_max, double leak_tol) {
    Mat a = annihilation(n_max);
    Mat gen = alpha * a.adjoint() - std::conj(alpha) * a;
    Mat d = expm_general(gen);
    check_leakage(d.col(0), leak_tol);
    return d;
}

Mat generalized_squeeze(int k, complexd zeta, int n_max, double leak_tol) {
    if (k < 1 || k > 4) throw DomainError("generalized_squeeze: k must be in {1,2,3,4}");
    // Circuits reuse the same few operators (echo arms, parity pairs), and the
    // eigendecomposition dominates at large n_max; memoize the last result.
    // G_k(-zeta) = G_k(zeta)^dagger covers the sign-flipped arm for free.
    struct CacheEntry {
        int k = 0;
        complexd zeta;
        int n_max = -1;
        Mat g;
    };
    static thread_local CacheEntry cache;
    if (cache.n_max == n_max && cache.k == k) {
        if (cache.zeta == zeta) {
            check_leakage(cache.g.col(0), leak_tol);
            return cache.g;
        }
        if (cache.zeta == -zeta) {
            Mat g = cache.g.adjoint();
            check_leakage(g.col(0), leak_tol);
            return g;
        }
    }
    Mat a = annihilation(n_max);
    Mat ak = a;
    for (int i = 1; i < k; ++i) ak = ak * a;
    Mat h = 0.5 * (std::conj(zeta) * ak + zeta * ak.adjoint());
    Mat g = expm_hermitian_unitary(h);
    check_leakage(g.col(0), leak_tol);
    cache = CacheEntry{k, zeta, n_max, g};
    return g;
}

Vec squeezed_vacuum_fock_amplitudes(complexd zeta, int n_cut) {
    if (n_cut < 2) throw DomainError("squeezed_vacuum_fock_amplitudes: n_cut must be >= 2");
    Vec c = Vec::Zero(n_cut + 1);
    double r = std::abs(zeta);
    if (r == 0.0) {
        c(0) = 1.0;
        return c;
    }
    complexd ratio = -std::exp(kI * std::arg(zeta)) * std::tanh(r);
    complexd cur = 1.0 / std::sqrt(std::cosh(r));
    c(0) = cur;
    for (int n = 0; 2 * (n + 1) <= n_cut; ++n) {
        cur *= ratio * std::sqrt((2.0 * n + 1.0) * (2.0 * n + 2.0)) / (2.0 * (n + 1.0));
        c(2 * (n + 1)) = cur;
    }
    return c;
}

Eigen::VectorXd thermal_populations(double nbar, int n_max) {
    if (nbar < 0.0) throw DomainError("thermal_populations: nbar must be >= 0");
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n_max + 1);
    if (nbar == 0.0) {
        p(0) = 1.0;
        return p;
    }
    double r = nbar / (nbar + 1.0);
    double cur = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        p(n) = cur;
        cur *= r;
    }
    p /= p.sum();
    return p;
}

Mat embed_spin_op(const Eigen::Matrix2cd& sigma, int i, int j, int spin_dim) {
    if (i == j || i < 0 || j < 0 || i >= spin_dim || j >= spin_dim) {
        throw IndexError("embed_spin_op: invalid level pair");
    }
    Mat m = Mat::Identity(spin_dim, spin_dim);
    m(i, i) = sigma(0, 0);
    m(i, j) = sigma(0, 1);
    m(j, i) = sigma(1, 0);
    m(j, j) = sigma(1, 1);
    return m;
}

Mat expm_hermitian_unitary(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Vec phases = (-kI * es.eigenvalues().cast<complexd>().array()).exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Mat expm_general(const Mat& a) {
    return a.exp();
}

HybridState::HybridState(int spin_dim, int n_max, Mat rho)
    : spin_dim_(spin_dim), n_max_(n_max), rho_(std::move(rho)) {
    if (spin_dim_ != 2 && spin_dim_ != 3) throw DomainError("HybridState: spin_dim must be 2 or 3");
    if (rho_.rows() != dim() || rho_.cols() != dim()) {
        throw DomainError("HybridState: density matrix dimension mismatch");
    }
}

HybridState HybridState::from_pure(int spin_dim, int n_max, const Vec& psi) {
    Vec normed = psi / psi.norm();
    return HybridState(spin_dim, n_max, normed * normed.adjoint());
}

HybridState HybridState::ground(int spin_dim, int n_max, int spin_level, double nbar) {
    if (spin_level < 0 || spin_level >= spin_dim) throw IndexError("ground: bad spin level");
    Mat osc = thermal_populations(nbar, n_max).cast<complexd>().asDiagonal();
    Mat spin = Mat::Zero(spin_dim, spin_dim);
    spin(spin_level, spin_level) = 1.0;
    return HybridState(spin_dim, n_max, spin_osc_kron(spin, osc));
}

Mat HybridState::reduced_osc() const {
    int od = osc_dim();
    Mat r = Mat::Zero(od, od);
    for (int s = 0; s < spin_dim_; ++s) r += rho_.block(s * od, s * od, od, od);
    return r;
}

Eigen::VectorXd HybridState::spin_populations() const {
    int od = osc_dim();
    Eigen::VectorXd p(spin_dim_);
    for (int s = 0; s < spin_dim_; ++s) p(s) = rho_.block(s * od, s * od, od, od).trace().real();
    return p;
}

Eigen::VectorXd HybridState::fock_populations() const {
    return reduced_osc().diagonal().real();
}

double HybridState::mean_phonon() const {
    Eigen::VectorXd p = fock_populations();
    double m = 0.0;
    for (int n = 0; n < p.size(); ++n) m += n * p(n);
    return m;
}

double HybridState::purity() const {
    return (rho_ * rho_).trace().real();
}

void HybridState::check_leakage(double leak_tol) const {
    Eigen::VectorXd p = fock_populations();
    int band = truncation_band(n_max_);
    double pop = p.tail(band).sum();
    if (pop > leak_tol) {
        throw LeakageError("truncation-band population " + std::to_string(pop) +
                           " exceeds tolerance " + std::to_string(leak_tol) + "; raise n_max");
    }
}

void HybridState::validate(double leak_tol, double eig_tol) const {
    double tr = rho_.trace().real();
    if (std::abs(tr - 1.0) > 1e-9) {
        throw CptpError("trace " + std::to_string(tr) + " deviates from 1");
    }
    if (!is_hermitian(rho_)) throw CptpError("density matrix not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho_, Eigen::EigenvaluesOnly);
    double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -eig_tol) {
        throw CptpError("negative eigenvalue " + std::to_string(min_eig));
    }
    check_leakage(leak_tol);
}

Mat spin_osc_kron(const Mat& spin_part, const Mat& osc_part) {
    int sd = static_cast<int>(spin_part.rows());
    int od = static_cast<int>(osc_part.rows());
    Mat out(sd * od, sd * od);
    for (int i = 0; i < sd; ++i) {
        for (int j = 0; j < sd; ++j) {
            out.block(i * od, j * od, od, od) = spin_part(i, j) * osc_part;
        }
    }
    return out;
}

}  // namespace hybridosc
