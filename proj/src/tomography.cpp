#include "hybridosc/tomography.hpp"

#include <cmath>
#include <sstream>

#include "hybridosc/errors.hpp"
#include "hybridosc/rng.hpp"

namespace hybridosc {

namespace {

constexpr complexd kI{0.0, 1.0};

Eigen::VectorXd trapezoid_weights(int n, double step) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, step);
    w(0) = step / 2.0;
    w(n - 1) = step / 2.0;
    return w;
}

}  // namespace

namespace {

/// Fills the diagonal band m = n + off of d with <m|D(beta)|n>, using
/// <n+off|D|n> = e^{-x/2} beta^off sqrt(n!/(n+off)!) L_n^{(off)}(x), x=|beta|^2.
/// The Laguerre values are carried with a running log-scale so intermediates
/// never overflow; the naive row recurrence is catastrophically unstable for
/// n >> m and is deliberately avoided.
void fill_displacement_diagonal(Mat& d, complexd beta, int off) {
    int dim = static_cast<int>(d.rows());
    double x = std::norm(beta);
    double logr = 0.5 * std::log(x);
    complexd phase = std::pow(beta / std::abs(beta), off);
    double l_prev = 0.0;
    double l_cur = 1.0;  // L_0
    double scale = 0.0;  // natural-log scale carried out of l_cur/l_prev
    for (int n = 0; n + off < dim; ++n) {
        double logpref = off * logr - 0.5 * x +
                         0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + off + 1.0));
        d(n + off, n) = phase * l_cur * std::exp(logpref + scale);
        double l_next = ((2.0 * n + 1.0 + off - x) * l_cur - (n + off) * l_prev) / (n + 1.0);
        l_prev = l_cur;
        l_cur = l_next;
        double mag = std::max(std::abs(l_cur), std::abs(l_prev));
        if (mag > 1e100) {
            l_cur /= 1e100;
            l_prev /= 1e100;
            scale += std::log(1e100);
        }
    }
}

}  // namespace

Mat displacement_elements(complexd beta, int dim) {
    if (dim < 1) throw DomainError("displacement_elements: dim must be >= 1");
    Mat d = Mat::Zero(dim, dim);
    if (beta == complexd(0.0, 0.0)) return Mat::Identity(dim, dim);
    for (int off = 0; off < dim; ++off) fill_displacement_diagonal(d, beta, off);
    // upper triangle via <m|D(beta)|n> = conj(<n|D(-beta)|m>)
    Mat lower = Mat::Zero(dim, dim);
    for (int off = 1; off < dim; ++off) fill_displacement_diagonal(lower, -beta, off);
    for (int m = 0; m < dim; ++m) {
        for (int n = m + 1; n < dim; ++n) d(m, n) = std::conj(lower(n, m));
    }
    return d;
}

complexd char_fn_exact(const Mat& rho_osc, complexd beta) {
    int dim = static_cast<int>(rho_osc.rows());
    Mat d = displacement_elements(beta, dim);
    complexd chi = 0.0;
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) chi += rho_osc(n, m) * d(m, n);
    }
    return chi;
}

CharGrid char_grid_exact(const Mat& rho_osc, double beta_max, int n) {
    if (n < 3 || n % 2 == 0) throw DomainError("char_grid_exact: n must be odd and >= 3");
    CharGrid grid;
    grid.beta_max = beta_max;
    grid.n = n;
    grid.values.setZero(n, n);

    // Factor D(br + i*bi) = e^{-i bi br} D(i bi) D(br), so with rho = sum_j
    // l_j |psi_j><psi_j| the grid is chi(r,c) = phase * sum_j l_j
    // <D(-i bi_r) psi_j, D(br_c) psi_j>. Displaced vectors along each axis
    // come from one-step ladders (collinear displacements compose without
    // phases), so the whole grid costs O(rank (n dim^2 + n^2 dim)) instead of
    // an O(dim^2) matrix build per point.
    //
    // The ladder vectors need head-room: displacing support n by beta pushes
    // population up to ~ n + 2 beta sqrt(n) + beta^2. Work in a padded space
    // sized from the state's actual support so truncation never bites.
    int in_dim = static_cast<int>(rho_osc.rows());
    int support = 1;
    for (int i = 0; i < in_dim; ++i) {
        if (rho_osc(i, i).real() > 1e-15) support = i + 1;
    }
    double shifted = std::pow(std::sqrt(static_cast<double>(support)) + beta_max, 2.0);
    int dim = static_cast<int>(std::ceil(shifted + 12.0 * std::sqrt(shifted))) + 25;
    int copy = std::min(in_dim, dim);
    Mat rho_work = Mat::Zero(dim, dim);
    rho_work.topLeftCorner(copy, copy) = rho_osc.topLeftCorner(copy, copy);
    Eigen::SelfAdjointEigenSolver<Mat> es(rho_work);
    double step = grid.step();
    int center = (n - 1) / 2;
    Mat d_right = displacement_elements(complexd(step, 0.0), dim);
    Mat d_up = displacement_elements(complexd(0.0, -step), dim);  // for D(-i bi)

    Eigen::MatrixXcd u(dim, n), v(dim, n);
    for (int j = 0; j < dim; ++j) {
        double lambda = es.eigenvalues()(j);
        if (lambda <= 1e-12) continue;  // discarded weight bounds the error
        Vec psi = es.eigenvectors().col(j);
        u.col(center) = psi;
        v.col(center) = psi;
        for (int k = 1; k <= center; ++k) {
            u.col(center + k) = d_right * u.col(center + k - 1);
            u.col(center - k) = d_right.adjoint() * u.col(center - k + 1);
            v.col(center + k) = d_up * v.col(center + k - 1);
            v.col(center - k) = d_up.adjoint() * v.col(center - k + 1);
        }
        grid.values.noalias() += lambda * (v.adjoint() * u);
    }
    for (int row = 0; row < n; ++row) {
        complexd phase = std::exp(-kI * grid.coord(row) * step);
        complexd p = std::exp(-kI * grid.coord(row) * grid.coord(0));
        for (int col = 0; col < n; ++col) {
            grid.values(row, col) *= p;
            p *= phase;
        }
    }
    return grid;
}

CharEstimate char_fn_measured(const Mat& rho_osc, complexd beta, bool imag_part, long shots,
                              std::uint64_t seed) {
    if (shots == 0) throw DomainError("char_fn_measured: shots must be nonzero");
    int dim = static_cast<int>(rho_osc.rows());

    // spin state before the conditioned displacement, in the sigma_y eigenbasis
    Eigen::Vector2cd chi_s;
    chi_s << 0.0, 1.0;  // |1_s>, dark
    if (imag_part) {
        Eigen::Matrix2cd ry;
        double c = std::cos(M_PI / 4.0), s = std::sin(M_PI / 4.0);
        ry << c, -s, s, c;
        chi_s = ry * chi_s;
    }
    complexd a = (chi_s(0) - kI * chi_s(1)) / std::sqrt(2.0);  // <+y|chi>
    complexd b = (chi_s(0) + kI * chi_s(1)) / std::sqrt(2.0);  // <-y|chi>

    // dark amplitude after D(sigma_y beta/2): A = i(a D(b/2) - b D(-b/2))/sqrt(2)
    Mat d_plus = displacement_elements(beta / 2.0, dim);
    Mat d_minus = displacement_elements(-beta / 2.0, dim);
    Mat amp = (kI / std::sqrt(2.0)) * (a * d_plus - b * d_minus);
    double p = (amp.adjoint() * amp * rho_osc).trace().real();
    p = std::min(std::max(p, 0.0), 1.0);

    // p_dark = 1/2 - Re[a b^* chi(beta)] = (1 + Re chi)/2 or (1 + Im chi)/2
    auto to_estimate = [](double pd) { return 2.0 * pd - 1.0; };
    CharEstimate est;
    est.p_dark = p;
    est.shots = shots;
    if (shots < 0) {  // analytic mode
        est.estimate = to_estimate(p);
        est.stderr_normal = 0.0;
        return est;
    }
    std::uint64_t state = derive_stream(seed, 0);
    double p_hat = static_cast<double>(binomial_draw(shots, p, state)) / static_cast<double>(shots);
    est.estimate = to_estimate(p_hat);
    est.stderr_normal = 2.0 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(shots));
    return est;
}

WignerGrid reconstruct_wigner(const CharGrid& grid, double x_max, int m) {
    if (m < 3) throw DomainError("reconstruct_wigner: m must be >= 3");
    double dbeta = grid.step();
    double alias_limit = M_PI / (2.0 * dbeta);  // max |alpha| resolvable
    if (x_max / std::sqrt(2.0) >= alias_limit) {
        throw AliasError("requested Wigner extent exceeds the FT alias limit " +
                         std::to_string(alias_limit * std::sqrt(2.0)));
    }
    WignerGrid out;
    out.x_max = x_max;
    out.m = m;
    out.values.resize(m, m);

    Eigen::VectorXd w = trapezoid_weights(grid.n, dbeta);
    // pass 1: over Re(beta) for every output Im(alpha)
    // F(ai_idx, bi_idx) = sum_br w(br) chi(bi, br) e^{2 i ai br}
    Eigen::MatrixXcd f(m, grid.n);
    for (int ai_idx = 0; ai_idx < m; ++ai_idx) {
        double ai = out.coord(ai_idx) / std::sqrt(2.0);
        Eigen::VectorXcd phase(grid.n);
        for (int k = 0; k < grid.n; ++k) {
            phase(k) = w(k) * std::exp(kI * (2.0 * ai * grid.coord(k)));
        }
        f.row(ai_idx) = (grid.values * phase).transpose();  // sum over columns (Re beta)
    }
    // pass 2: over Im(beta) for every output Re(alpha)
    for (int ar_idx = 0; ar_idx < m; ++ar_idx) {
        double ar = out.coord(ar_idx) / std::sqrt(2.0);
        Eigen::VectorXcd phase(grid.n);
        for (int k = 0; k < grid.n; ++k) {
            phase(k) = w(k) * std::exp(-kI * (2.0 * ar * grid.coord(k)));
        }
        Eigen::VectorXcd col = f * phase;  // one value per Im(alpha)
        for (int ai_idx = 0; ai_idx < m; ++ai_idx) {
            out.values(ai_idx, ar_idx) = col(ai_idx).real() / (2.0 * M_PI * M_PI);
        }
    }
    return out;
}

double wigner_parity_oracle(const Mat& rho_osc, complexd alpha) {
    int dim = static_cast<int>(rho_osc.rows());
    Mat a = annihilation(dim - 1);
    Mat gen = alpha * a.adjoint() - std::conj(alpha) * a;
    Mat d = expm_general(gen);  // deliberately not the recurrence route
    Vec parity(dim);
    for (int n = 0; n < dim; ++n) parity(n) = (n % 2 == 0) ? 1.0 : -1.0;
    Mat displaced = d * parity.asDiagonal() * d.adjoint();
    return (rho_osc * displaced).trace().real() / M_PI;
}

double wigner_mass(const WignerGrid& grid) {
    Eigen::VectorXd w = trapezoid_weights(grid.m, grid.step());
    return w.transpose() * grid.values * w;
}

WignerGrid window_wigner(const WignerGrid& grid, double mass_fraction) {
    if (mass_fraction <= 0.0 || mass_fraction > 1.0) {
        throw DomainError("window_wigner: mass_fraction must be in (0, 1]");
    }
    if (grid.m % 2 == 0) throw DomainError("window_wigner: grid size must be odd");
    if (mass_fraction == 1.0) {
        WignerGrid out = grid;
        out.window_half = grid.x_max;
        return out;
    }
    double total = wigner_mass(grid);
    int center = (grid.m - 1) / 2;

    int chosen = center;
    for (int k = 1; k <= center; ++k) {
        int n = 2 * k + 1;
        Eigen::VectorXd w = trapezoid_weights(n, grid.step());
        double inner =
            w.transpose() * grid.values.block(center - k, center - k, n, n) * w;
        if (inner >= mass_fraction * total) {
            chosen = k;
            break;
        }
    }
    WignerGrid out = grid;
    out.window_half = chosen * grid.step();
    for (int row = 0; row < grid.m; ++row) {
        for (int col = 0; col < grid.m; ++col) {
            if (std::abs(row - center) > chosen || std::abs(col - center) > chosen) {
                out.values(row, col) = 0.0;
            }
        }
    }
    return out;
}

WignerGrid rotate_wigner(const WignerGrid& grid, double angle) {
    WignerGrid out = grid;
    double c = std::cos(angle), s = std::sin(angle);
    double step = grid.step();
    for (int row = 0; row < grid.m; ++row) {
        double p = grid.coord(row);
        for (int col = 0; col < grid.m; ++col) {
            double x = grid.coord(col);
            // sample the source at the inverse-rotated point
            double xs = c * x + s * p;
            double ps = -s * x + c * p;
            double fc = (xs + grid.x_max) / step;
            double fr = (ps + grid.x_max) / step;
            if (fc < 0.0 || fr < 0.0 || fc > grid.m - 1 || fr > grid.m - 1) {
                out.values(row, col) = 0.0;
                continue;
            }
            int c0 = std::min(static_cast<int>(std::floor(fc)), grid.m - 2);
            int r0 = std::min(static_cast<int>(std::floor(fr)), grid.m - 2);
            double tx = fc - c0, tr = fr - r0;
            out.values(row, col) = (1 - tr) * ((1 - tx) * grid.values(r0, c0) +
                                               tx * grid.values(r0, c0 + 1)) +
                                   tr * ((1 - tx) * grid.values(r0 + 1, c0) +
                                         tx * grid.values(r0 + 1, c0 + 1));
        }
    }
    return out;
}

std::string char_grid_csv(const CharGrid& grid) {
    std::ostringstream os;
    os.precision(12);
    os << "extent," << grid.beta_max << "\n";
    os << "N," << grid.n << "\n";
    for (int row = 0; row < grid.n; ++row) {
        for (int col = 0; col < grid.n; ++col) {
            os << grid.values(row, col).real() << "," << grid.values(row, col).imag() << "\n";
        }
    }
    return os.str();
}

std::string wigner_grid_csv(const WignerGrid& grid) {
    std::ostringstream os;
    os.precision(12);
    os << "extent," << grid.x_max << "\n";
    os << "N," << grid.m << "\n";
    for (int row = 0; row < grid.m; ++row) {
        for (int col = 0; col < grid.m; ++col) os << grid.values(row, col) << "\n";
    }
    return os.str();
}

nlohmann::json char_grid_json(const CharGrid& grid) {
    nlohmann::json values = nlohmann::json::array();
    for (int row = 0; row < grid.n; ++row) {
        for (int col = 0; col < grid.n; ++col) {
            values.push_back({grid.values(row, col).real(), grid.values(row, col).imag()});
        }
    }
    return {{"extent", grid.beta_max}, {"N", grid.n}, {"values", values}};
}

nlohmann::json wigner_grid_json(const WignerGrid& grid) {
    nlohmann::json values = nlohmann::json::array();
    for (int row = 0; row < grid.m; ++row) {
        for (int col = 0; col < grid.m; ++col) values.push_back(grid.values(row, col));
    }
    nlohmann::json j = {{"extent", grid.x_max}, {"N", grid.m}, {"values", values}};
    if (grid.window_half > 0.0) j["window_half"] = grid.window_half;
    return j;
}

}  // namespace hybridosc
