#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "hybridosc/fock.hpp"

namespace hybridosc {

/// Square grid of chi(beta) samples; beta = coord(col) + i*coord(row).
struct CharGrid {
    double beta_max = 6.0;
    int n = 201;  // odd, so beta = 0 is a sample
    Eigen::MatrixXcd values;

    double step() const { return 2.0 * beta_max / (n - 1); }
    double coord(int i) const { return -beta_max + i * step(); }
};

/// Square grid of W(x, p); value at (row, col) is W(coord(col), coord(row)).
struct WignerGrid {
    double x_max = 12.0;
    int m = 401;
    Eigen::MatrixXd values;
    double window_half = 0.0;  // half-side of an applied window; 0 if none

    double step() const { return 2.0 * x_max / (m - 1); }
    double coord(int i) const { return -x_max + i * step(); }
};

/// All matrix elements <m|D(beta)|n> by the exact two-term recurrence; no
/// matrix exponential involved.
Mat displacement_elements(complexd beta, int dim);

/// chi(beta) = Tr(rho_osc D(beta)).
complexd char_fn_exact(const Mat& rho_osc, complexd beta);

CharGrid char_grid_exact(const Mat& rho_osc, double beta_max = 6.0, int n = 201);

struct CharEstimate {
    double estimate = 0.0;
    double stderr_normal = 0.0;
    double p_dark = 0.0;  // exact herald probability underlying the draw
    long shots = 0;
};

/// Spin protocol for one quadrature of chi: spin starts dark, an R_y(pi/2)
/// precedes the sigma_y-conditioned displacement D(sigma_y beta/2) when the
/// imaginary part is requested, and the dark-state probability encodes
/// (1 +- Re/Im chi)/2. shots < 0 returns the analytic (infinite-shot) value.
CharEstimate char_fn_measured(const Mat& rho_osc, complexd beta, bool imag_part, long shots,
                              std::uint64_t seed);

/// W(x,p) = (1/(2 pi^2)) integral chi(beta) e^{alpha beta^* - alpha^* beta} d2beta
/// with alpha = (x + ip)/sqrt(2), evaluated as two separable trapezoid passes.
/// Throws AliasError if the requested extent exceeds the FT alias limit
/// pi/(2 * beta step) (in alpha units).
WignerGrid reconstruct_wigner(const CharGrid& grid, double x_max = 12.0, int m = 401);

/// Displaced-parity value (1/pi) Tr[rho D(a) P D(a)^dag], a = (x+ip)/sqrt(2);
/// equals W(x,p) in this convention. Independent of the FT route.
double wigner_parity_oracle(const Mat& rho_osc, complexd alpha);

/// Smallest centered square holding mass_fraction of the total integral;
/// values outside are zeroed and the half-side is recorded on the result.
WignerGrid window_wigner(const WignerGrid& grid, double mass_fraction = 0.95);

/// Bilinear rotation about the origin; points mapping outside the grid read 0.
WignerGrid rotate_wigner(const WignerGrid& grid, double angle);

/// Trapezoid integral of the grid (signed).
double wigner_mass(const WignerGrid& grid);

std::string char_grid_csv(const CharGrid& grid);
std::string wigner_grid_csv(const WignerGrid& grid);
nlohmann::json char_grid_json(const CharGrid& grid);
nlohmann::json wigner_grid_json(const WignerGrid& grid);

}  // namespace hybridosc
