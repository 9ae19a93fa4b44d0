#include "hybridosc/evolution.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace hybridosc {

namespace {

constexpr complexd kI{0.0, 1.0};

/// U = sum_s P_s (x) branch(s) on the sigma eigenbasis of the (0,1) pair,
/// identity on a third level.
Mat conditioned_unitary(int spin_dim, int n_max, const Eigen::Matrix2cd& sigma,
                        const Mat& branch_plus, const Mat& branch_minus) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(sigma);
    int od = n_max + 1;
    Mat u = Mat::Zero(spin_dim * od, spin_dim * od);
    for (int idx = 0; idx < 2; ++idx) {
        double s = es.eigenvalues()(idx);
        Eigen::Vector2cd v = es.eigenvectors().col(idx);
        Eigen::Matrix2cd vv = v * v.adjoint();
        // projector supported on the (0,1) pair only
        Mat proj = Mat::Zero(spin_dim, spin_dim);
        proj.topLeftCorner(2, 2) = vv;
        u += spin_osc_kron(proj, s > 0 ? branch_plus : branch_minus);
    }
    if (spin_dim == 3) {
        Mat e22 = Mat::Zero(3, 3);
        e22(2, 2) = 1.0;
        u += spin_osc_kron(e22, Mat::Identity(od, od));
    }
    return u;
}

}  // namespace

Eigen::Matrix2cd SDFSpec::sigma() const {
    if (axis == PauliAxis::Z) return pauli(PauliAxis::Z);
    double base = (axis == PauliAxis::X) ? 0.0 : M_PI / 2.0;
    return pauli_xy(base + axis_offset);
}

double effective_coupling(int k, double omega_a, double omega_ap, double delta, double theta) {
    if (delta == 0.0) throw DomainError("effective_coupling: Delta must be nonzero");
    double base;
    switch (k) {
        case 2:
            base = omega_ap * omega_a / delta;
            break;
        case 3:
            base = omega_ap * omega_a * omega_a / (2.0 * delta * delta);
            break;
        case 4:
            base = omega_ap * omega_a * omega_a * omega_a / (8.0 * delta * delta * delta);
            break;
        default:
            throw DomainError("effective_coupling: k must be in {2,3,4}");
    }
    return base * std::sin(theta);
}

complexd effective_zeta(double omega_k, double t, double phi) {
    return omega_k * t * std::exp(kI * (phi - M_PI / 2.0));
}

PauliAxis effective_spin_basis(int k, PauliAxis a, PauliAxis ap) {
    if (a == ap) throw DomainError("effective_spin_basis: spin conditionings must not commute");
    if (k % 2 != 0) return ap;
    // [sigma_a, sigma_a'] is proportional to the remaining axis
    for (PauliAxis third : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
        if (third != a && third != ap) return third;
    }
    throw DomainError("effective_spin_basis: unreachable");
}

Mat conditioned_nonlinear_unitary(int spin_dim, int n_max, const NonlinearSpec& spec,
                                  double leak_tol) {
    Mat g_plus = generalized_squeeze(spec.k, spec.zeta, n_max, leak_tol);
    Mat g_minus = g_plus.adjoint();  // G_k(-zeta) = G_k(zeta)^dagger
    check_leakage(g_minus.col(0), leak_tol);
    return conditioned_unitary(spin_dim, n_max, pauli(spec.cond_basis), g_plus, g_minus);
}

Mat conditioned_displacement_unitary(int spin_dim, int n_max, const Eigen::Matrix2cd& sigma,
                                     complexd alpha, double leak_tol) {
    Mat d_plus = displacement(alpha, n_max, leak_tol);
    Mat d_minus = displacement(-alpha, n_max, leak_tol);
    return conditioned_unitary(spin_dim, n_max, sigma, d_plus, d_minus);
}

Mat spin_rotation_unitary(int spin_dim, int n_max, int i, int j, double gamma, double theta) {
    Eigen::Matrix2cd r = std::cos(theta / 2.0) * Eigen::Matrix2cd::Identity() -
                         kI * std::sin(theta / 2.0) * pauli_xy(gamma);
    return spin_osc_kron(embed_spin_op(r, i, j, spin_dim), Mat::Identity(n_max + 1, n_max + 1));
}

HybridState apply_conditioned_nonlinear(const HybridState& state, const NonlinearSpec& spec,
                                        double leak_tol) {
    Mat u = conditioned_nonlinear_unitary(state.spin_dim(), state.n_max(), spec, leak_tol);
    HybridState out(state.spin_dim(), state.n_max(), u * state.rho() * u.adjoint());
    out.check_leakage(leak_tol);
    return out;
}

HybridState spin_rotation(const HybridState& state, int i, int j, double gamma, double theta) {
    Mat u = spin_rotation_unitary(state.spin_dim(), state.n_max(), i, j, gamma, theta);
    return HybridState(state.spin_dim(), state.n_max(), u * state.rho() * u.adjoint());
}

namespace {

struct SdfGenerator {
    Mat a1, a2;  // kron(sigma_j, a)
    double om1, om2;
    double det1, det2;  // m*delta
    double phi1, phi2;

    void apply(double t, const Vec& psi, Vec& out) const {
        complexd ph1 = std::exp(-kI * (det1 * t + phi1));
        complexd ph2 = std::exp(-kI * (det2 * t + phi2));
        out.noalias() = (0.5 * om1 * ph1) * (a1 * psi);
        out.noalias() += (0.5 * om1 * std::conj(ph1)) * (a1.adjoint() * psi);
        out.noalias() += (0.5 * om2 * ph2) * (a2 * psi);
        out.noalias() += (0.5 * om2 * std::conj(ph2)) * (a2.adjoint() * psi);
        out *= -kI;
    }
};

Vec rk4_sdf(const SdfGenerator& gen, Vec psi, double t, int steps) {
    double dt = t / steps;
    Vec k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size()), tmp(psi.size());
    for (int i = 0; i < steps; ++i) {
        double t0 = i * dt;
        gen.apply(t0, psi, k1);
        tmp = psi + 0.5 * dt * k1;
        gen.apply(t0 + 0.5 * dt, tmp, k2);
        tmp = psi + 0.5 * dt * k2;
        gen.apply(t0 + 0.5 * dt, tmp, k3);
        tmp = psi + dt * k3;
        gen.apply(t0 + dt, tmp, k4);
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return psi / psi.norm();
}

SdfGenerator make_generator(int spin_dim, int n_max, const SDFSpec& sdf1, const SDFSpec& sdf2) {
    Mat a = annihilation(n_max);
    SdfGenerator gen;
    gen.a1 = spin_osc_kron(embed_spin_op(sdf1.sigma(), 0, 1, spin_dim), a);
    gen.a2 = spin_osc_kron(embed_spin_op(sdf2.sigma(), 0, 1, spin_dim), a);
    gen.om1 = sdf1.omega;
    gen.om2 = sdf2.omega;
    gen.det1 = sdf1.m * sdf1.delta;
    gen.det2 = sdf2.m * sdf2.delta;
    gen.phi1 = sdf1.phi;
    gen.phi2 = sdf2.phi;
    return gen;
}

}  // namespace

Vec evolve_full_sdf(const Vec& psi, int spin_dim, int n_max, const SDFSpec& sdf1,
                    const SDFSpec& sdf2, double t, int steps, bool verify) {
    if (steps < 1) throw DomainError("evolve_full_sdf: steps must be >= 1");
    if (t == 0.0) return psi;
    SdfGenerator gen = make_generator(spin_dim, n_max, sdf1, sdf2);
    Vec out = rk4_sdf(gen, psi, t, steps);
    if (verify) {
        Vec ref = rk4_sdf(gen, psi, t, 2 * steps);
        double f = std::norm(ref.dot(out));
        if (1.0 - f > 1e-8) {
            throw ConvergenceError("evolve_full_sdf: fidelity changed by " +
                                   std::to_string(1.0 - f) + " under step halving");
        }
    }
    return out;
}

HybridState evolve_full_sdf(const HybridState& state, const SDFSpec& sdf1, const SDFSpec& sdf2,
                            double t, int steps, bool verify) {
    // Propagate the eigenvector columns of rho; exact for any rank.
    Eigen::SelfAdjointEigenSolver<Mat> es(state.rho());
    Mat rho = Mat::Zero(state.dim(), state.dim());
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double w = es.eigenvalues()(i);
        if (w < 1e-14) continue;
        Vec col = evolve_full_sdf(Vec(es.eigenvectors().col(i)), state.spin_dim(), state.n_max(),
                                  sdf1, sdf2, t, steps, verify);
        rho += w * col * col.adjoint();
        verify = false;  // one convergence check is enough
    }
    rho /= rho.trace();
    return HybridState(state.spin_dim(), state.n_max(), rho);
}

namespace {

/// d rho(m,n)/dt = ndot [ sqrt((m+1)(n+1)) rho(m+1,n+1)
///                      + sqrt(m n) rho(m-1,n-1) - (m+n+1) rho(m,n) ]
/// applied within every spin block pair.
void heating_rhs(const Mat& rho, double ndot, int spin_dim, int od, Mat& out) {
    out.setZero();
    for (int sa = 0; sa < spin_dim; ++sa) {
        for (int sb = 0; sb < spin_dim; ++sb) {
            int ra = sa * od, rb = sb * od;
            for (int m = 0; m < od; ++m) {
                for (int n = 0; n < od; ++n) {
                    complexd v = -(m + n + 1.0) * rho(ra + m, rb + n);
                    if (m + 1 < od && n + 1 < od) {
                        v += std::sqrt((m + 1.0) * (n + 1.0)) * rho(ra + m + 1, rb + n + 1);
                    }
                    if (m >= 1 && n >= 1) {
                        v += std::sqrt(static_cast<double>(m) * n) * rho(ra + m - 1, rb + n - 1);
                    }
                    out(ra + m, rb + n) = ndot * v;
                }
            }
        }
    }
}

}  // namespace

HybridState apply_heating(const HybridState& state, double ndot, double t, int steps,
                          double leak_tol) {
    if (ndot < 0.0) throw DomainError("apply_heating: ndot must be >= 0");
    if (ndot == 0.0 || t == 0.0) return state;
    if (steps <= 0) {
        double dt = std::min(1e-6, t / 100.0);
        steps = std::max(1, static_cast<int>(std::ceil(t / dt)));
    }
    double dt = t / steps;
    int od = state.osc_dim();
    int sd = state.spin_dim();
    Mat rho = state.rho();
    Mat k1(rho.rows(), rho.cols()), k2 = k1, k3 = k1, k4 = k1, tmp = k1;
    for (int i = 0; i < steps; ++i) {
        heating_rhs(rho, ndot, sd, od, k1);
        tmp = rho + 0.5 * dt * k1;
        heating_rhs(tmp, ndot, sd, od, k2);
        tmp = rho + 0.5 * dt * k2;
        heating_rhs(tmp, ndot, sd, od, k3);
        tmp = rho + dt * k3;
        heating_rhs(tmp, ndot, sd, od, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    HybridState out(sd, state.n_max(), std::move(rho));
    out.check_leakage(leak_tol);
    double tr = out.rho().trace().real();
    if (std::abs(tr - 1.0) > 1e-7) throw CptpError("apply_heating: trace drift " + std::to_string(tr - 1.0));
    return out;
}

EchoArms wrap_spin_echo(const NonlinearSpec& spec, double echo_gamma) {
    if (spec.cond_basis != PauliAxis::Z) {
        throw DomainError("wrap_spin_echo: only z-conditioned interactions take an echo");
    }
    NonlinearSpec half = spec;
    half.zeta = spec.zeta * 0.5;
    half.echo_gamma.reset();
    NonlinearSpec half_pi = half;
    half_pi.zeta = -half.zeta;  // oscillator phase advanced by pi in the second arm
    return EchoArms{half, echo_gamma, half_pi};
}

EchoArms wrap_spin_echo(const NonlinearSpec& spec, PauliAxis echo_axis) {
    if (echo_axis == PauliAxis::Z) throw DomainError("wrap_spin_echo: echo axis must be x or y");
    return wrap_spin_echo(spec, echo_axis == PauliAxis::X ? 0.0 : M_PI / 2.0);
}

double fidelity(const Vec& a, const Vec& b) {
    return std::norm(a.normalized().dot(b.normalized()));
}

double fidelity(const Mat& rho, const Mat& sigma) {
    // Tr(rho sigma) when either input is pure, full Uhlmann otherwise.
    double pr = (rho * rho).trace().real();
    double ps = (sigma * sigma).trace().real();
    if (pr > 1.0 - 1e-10 || ps > 1.0 - 1e-10) return (rho * sigma).trace().real();
    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    Vec sqrt_eigs = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<complexd>();
    Mat sq = es.eigenvectors() * sqrt_eigs.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es2(sq * sigma * sq);
    double f = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return f * f;
}

}  // namespace hybridosc
