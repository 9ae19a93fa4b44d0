#pragma once

#include <optional>

#include "hybridosc/fock.hpp"

namespace hybridosc {

/// One spin-dependent force: H = (Omega/2) sigma_axis (a e^{-i(m Delta t + phi)} + h.c.)
struct SDFSpec {
    PauliAxis axis = PauliAxis::X;
    double axis_offset = 0.0;  // extra rotation of the conditioning axis in the xy-plane (rad)
    double omega = 0.0;        // rad/s
    double delta = 0.0;        // rad/s
    int m = 1;                 // integer detuning multiple; effective detuning is m*delta
    double phi = 0.0;          // oscillator phase (rad)

    Eigen::Matrix2cd sigma() const;
};

/// Spin-conditioned generalized squeezing of order k. The sigma_beta
/// eigenvalue-s branch receives G_k(s zeta). An attached echo_gamma turns the
/// interaction into [half arm, R_gamma(pi), phase-advanced half arm].
struct NonlinearSpec {
    int k = 2;
    complexd zeta{0.0, 0.0};
    PauliAxis cond_basis = PauliAxis::Z;
    std::optional<double> echo_gamma;  // axis angle of the embedded pi pulse (x: 0, y: pi/2)
};

struct NoiseSpec {
    double nbar0 = 0.0;  // initial thermal occupation
    double ndot = 0.0;   // heating rate, quanta/s
    bool enabled = false;
};

/// Effective coupling Omega_k of the two-SDF synthesis:
/// {Om_a' Om_a / Delta, Om_a' Om_a^2 / (2 Delta^2), Om_a' Om_a^3 / (8 Delta^3)} * sin(theta).
double effective_coupling(int k, double omega_a, double omega_ap, double delta, double theta);

/// Squeezing parameter synthesized by the two-SDF scheme over a duration t:
/// Omega_k * t * e^{i(phi - pi/2)}. The -pi/2 offset relative to the nominal
/// labeling is pinned by the full-integration comparison tests.
complexd effective_zeta(double omega_k, double t, double phi);

/// Spin basis of the synthesized interaction: ~[sigma_a, sigma_a'] for even k,
/// sigma_a' for odd k. Throws DomainError if the axes commute.
PauliAxis effective_spin_basis(int k, PauliAxis a, PauliAxis ap);

/// Full conditioned unitary exp(-i sigma_beta (x) (zeta^* a^k + zeta a^dag^k)/2)
/// on the hybrid space. On a qutrit the |2_s> branch is untouched. Ignores any
/// echo annotation (the executor expands echoes).
Mat conditioned_nonlinear_unitary(int spin_dim, int n_max, const NonlinearSpec& spec,
                                  double leak_tol = kDefaultLeakTol);

/// Conditioned displacement exp(sigma (x) (alpha a^dag - alpha^* a)); the
/// sigma-eigenvalue-s branch receives D(s alpha). Pair (0,1) only.
Mat conditioned_displacement_unitary(int spin_dim, int n_max, const Eigen::Matrix2cd& sigma,
                                     complexd alpha, double leak_tol = kDefaultLeakTol);

/// exp(-i theta sigma_gamma / 2) on spin pair (i,j), identity on the oscillator.
Mat spin_rotation_unitary(int spin_dim, int n_max, int i, int j, double gamma, double theta);

HybridState apply_conditioned_nonlinear(const HybridState& state, const NonlinearSpec& spec,
                                        double leak_tol = kDefaultLeakTol);

HybridState spin_rotation(const HybridState& state, int i, int j, double gamma, double theta);

/// Time-ordered fixed-step RK4 integration of the interaction-picture two-SDF
/// Hamiltonian applied to a pure hybrid state. With verify set, the step count
/// is doubled once and a fidelity change above 1e-8 raises ConvergenceError.
Vec evolve_full_sdf(const Vec& psi, int spin_dim, int n_max, const SDFSpec& sdf1,
                    const SDFSpec& sdf2, double t, int steps, bool verify = false);

HybridState evolve_full_sdf(const HybridState& state, const SDFSpec& sdf1, const SDFSpec& sdf2,
                            double t, int steps, bool verify = false);

/// Infinite-temperature heating dissipator (jump operators sqrt(ndot) a and
/// sqrt(ndot) a^dag), fixed-step RK4; d nbar/dt = ndot. steps <= 0 picks the
/// default step min(1us, t/100).
HybridState apply_heating(const HybridState& state, double ndot, double t, int steps = 0,
                          double leak_tol = kDefaultLeakTol);

/// Echo expansion of a z-conditioned interaction: [half arm, R_gamma(pi),
/// half arm with the oscillator phase advanced by pi]. The echo axis selects
/// which spin outcome heralds the even superposition.
struct EchoArms {
    NonlinearSpec first;
    double pi_axis_gamma;
    NonlinearSpec second;
};
EchoArms wrap_spin_echo(const NonlinearSpec& spec, double echo_gamma);
EchoArms wrap_spin_echo(const NonlinearSpec& spec, PauliAxis echo_axis);

/// State fidelity between density matrices (squared overlap for pure inputs).
double fidelity(const Mat& rho, const Mat& sigma);
double fidelity(const Vec& a, const Vec& b);

}  // namespace hybridosc
