#pragma once

#include <complex>

#include <Eigen/Dense>

#include "hybridosc/errors.hpp"

namespace hybridosc {

using complexd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Default tolerance for the truncation-band (leakage) guard.
inline constexpr double kDefaultLeakTol = 1e-8;

enum class PauliAxis { X, Y, Z };

Eigen::Matrix2cd pauli(PauliAxis axis);

/// cos(gamma) sigma_x + sin(gamma) sigma_y
Eigen::Matrix2cd pauli_xy(double gamma);

bool is_hermitian(const Mat& m, double rel_tol = 1e-12);

/// Number of Fock levels in the guard band at the top of the truncated space.
int truncation_band(int n_max);

/// Population of an oscillator vector in the top truncation band.
double band_population(const Vec& psi_osc);

void check_leakage(const Vec& psi_osc, double tol);

/// a on the truncated space of dimension n_max+1: <n-1|a|n> = sqrt(n).
Mat annihilation(int n_max);

/// D(alpha) = exp(alpha a^dag - alpha^* a), truncated-generator exponential
/// (scaling and squaring). Guards on the vacuum image.
Mat displacement(complexd alpha, int n_max, double leak_tol = kDefaultLeakTol);

/// G_k(zeta) = exp(-i (zeta^* a^k + zeta a^dag^k)/2), k in {1,2,3,4}.
/// Hermitian generator, exponentiated by eigendecomposition. Guards on the
/// vacuum image.
Mat generalized_squeeze(int k, complexd zeta, int n_max, double leak_tol = kDefaultLeakTol);

/// Closed-form Fock amplitudes of a squeezed vacuum: entries at even levels
/// c_{2n} = (-e^{i arg zeta} tanh|zeta|)^n sqrt((2n)!)/(2^n n!) / sqrt(cosh|zeta|).
/// Matches G_2(zeta)|0> in magnitude; the phase convention differs by a
/// zeta-phase rotation (G_2(zeta) = S(i zeta) in the usual squeeze-operator
/// notation), so only magnitudes are contract-bearing.
Vec squeezed_vacuum_fock_amplitudes(complexd zeta, int n_cut);

/// Boltzmann populations p_n ~ (nbar/(nbar+1))^n, renormalized on the
/// truncated space.
Eigen::VectorXd thermal_populations(double nbar, int n_max);

/// Embed a 2x2 spin operator on levels {i, j} of a spin_dim-level system,
/// identity on the remaining level(s).
Mat embed_spin_op(const Eigen::Matrix2cd& sigma, int i, int j, int spin_dim);

/// exp(-i H) for Hermitian H, via eigendecomposition.
Mat expm_hermitian_unitary(const Mat& h);

/// exp(A) for general A (Pade scaling and squaring).
Mat expm_general(const Mat& a);

/// Density matrix over spin (x) oscillator, tensor order spin outermost:
/// index = s * (n_max + 1) + n.
class HybridState {
  public:
    HybridState(int spin_dim, int n_max, Mat rho);

    static HybridState from_pure(int spin_dim, int n_max, const Vec& psi);

    /// Thermal oscillator (mean occupation nbar) with the spin in a definite
    /// level.
    static HybridState ground(int spin_dim, int n_max, int spin_level, double nbar = 0.0);

    int spin_dim() const { return spin_dim_; }
    int n_max() const { return n_max_; }
    int osc_dim() const { return n_max_ + 1; }
    int dim() const { return spin_dim_ * (n_max_ + 1); }

    const Mat& rho() const { return rho_; }
    Mat& rho() { return rho_; }

    /// Partial trace over the spin.
    Mat reduced_osc() const;

    /// Populations of the spin levels.
    Eigen::VectorXd spin_populations() const;

    /// Diagonal of the reduced oscillator state.
    Eigen::VectorXd fock_populations() const;

    double mean_phonon() const;
    double purity() const;

    /// Trace, Hermiticity, positivity and leakage checks; throws CptpError /
    /// LeakageError.
    void validate(double leak_tol = kDefaultLeakTol, double eig_tol = 1e-9) const;

    /// Leakage check only (cheap, no eigensolve).
    void check_leakage(double leak_tol = kDefaultLeakTol) const;

  private:
    int spin_dim_;
    int n_max_;
    Mat rho_;
};

/// kron(spin_part, osc_part) in the fixed spin (x) oscillator order.
Mat spin_osc_kron(const Mat& spin_part, const Mat& osc_part);

}  // namespace hybridosc
