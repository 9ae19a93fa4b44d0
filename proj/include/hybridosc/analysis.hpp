#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridosc/detection.hpp"
#include "hybridosc/tomography.hpp"

namespace hybridosc {

/// Herald weights (|N+|^2, |N-|^2) = (2 +- 2/sqrt(cosh 2|zeta|))/4 for the
/// k=2 even/odd superpositions.
std::pair<double, double> normalization_coeff_closed(double zeta2_abs);

/// log of the trapezoid integral of |W|. Throws CoverageError unless the
/// smallest centered square holding 99% of the |W| mass sits clear of the
/// grid boundary, i.e. the grid demonstrably covers the state.
double wln(const WignerGrid& grid);

double min_wigner(const WignerGrid& grid);

/// (Var x, Var p) from the trapezoid marginals P_x, P_p of the grid.
std::pair<double, double> quadrature_variances(const WignerGrid& grid);

/// Principal-axis angle of the grid's covariance matrix (second central
/// moments by 2-D trapezoid); rotate_wigner(grid, -angle) aligns the axes.
double principal_axis_angle(const WignerGrid& grid);

/// (Var x, Var p) from operator moments Tr(rho x^2) etc., x = (a + a')/sqrt2.
std::pair<double, double> operator_variances(const Mat& rho_osc);

/// Diagonal of rho_osc, first n_cut entries.
Eigen::VectorXd fock_populations(const Mat& rho_osc, int n_cut);

struct MetricsReport {
    double wln = 0.0;             // on the 0.95-mass window
    double wln_unwindowed = 0.0;
    double window_half = 0.0;
    double min_w = 0.0;
    double var_x = 0.0;
    double var_p = 0.0;
    double mean_phonon = 0.0;
    double herald_probability = 0.0;
    Eigen::VectorXd fock_pops;
};

MetricsReport compute_metrics(const Mat& rho_osc, const WignerGrid& grid,
                              double herald_probability, int n_cut = 20);

nlohmann::json metrics_json(const MetricsReport& report);

struct TableRow {
    std::string state;  // "even" / "odd"
    std::string mode;   // "ideal" / "realistic"
    double wln = 0.0;
    double min_w = 0.0;
};

std::string table_b1_csv(const std::vector<TableRow>& rows);

}  // namespace hybridosc
