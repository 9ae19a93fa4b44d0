#include "hybridosc/analysis.hpp"

#include <cmath>
#include <sstream>

#include "hybridosc/errors.hpp"

namespace hybridosc {

namespace {

Eigen::VectorXd trapezoid_weights(int n, double step) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, step);
    w(0) = step / 2.0;
    w(n - 1) = step / 2.0;
    return w;
}

}  // namespace

std::pair<double, double> normalization_coeff_closed(double zeta2_abs) {
    if (zeta2_abs < 0.0) throw DomainError("normalization_coeff_closed: |zeta| must be >= 0");
    double overlap = 1.0 / std::sqrt(std::cosh(2.0 * zeta2_abs));
    return {(2.0 + 2.0 * overlap) / 4.0, (2.0 - 2.0 * overlap) / 4.0};
}

double wln(const WignerGrid& grid) {
    WignerGrid abs_grid = grid;
    abs_grid.values = grid.values.cwiseAbs();
    WignerGrid report = window_wigner(abs_grid, 0.99);
    if (report.window_half > 0.9 * grid.x_max) {
        throw CoverageError("wln: grid holds < 99% of the |W| mass away from its boundary");
    }
    return std::log(wigner_mass(abs_grid));
}

double min_wigner(const WignerGrid& grid) { return grid.values.minCoeff(); }

std::pair<double, double> quadrature_variances(const WignerGrid& grid) {
    Eigen::VectorXd w = trapezoid_weights(grid.m, grid.step());
    // values(row, col) = W(x = coord(col), p = coord(row))
    Eigen::VectorXd p_x = grid.values.transpose() * w;  // integrate over p
    Eigen::VectorXd p_p = grid.values * w;              // integrate over x
    Eigen::VectorXd coords(grid.m);
    for (int i = 0; i < grid.m; ++i) coords(i) = grid.coord(i);
    auto var = [&](const Eigen::VectorXd& marginal) {
        double norm = w.dot(marginal);
        double mean = w.dot((coords.array() * marginal.array()).matrix()) / norm;
        double second =
            w.dot((coords.array().square() * marginal.array()).matrix()) / norm;
        return second - mean * mean;
    };
    return {var(p_x), var(p_p)};
}

double principal_axis_angle(const WignerGrid& grid) {
    Eigen::VectorXd w = trapezoid_weights(grid.m, grid.step());
    Eigen::VectorXd coords(grid.m);
    for (int i = 0; i < grid.m; ++i) coords(i) = grid.coord(i);
    auto quad = [&](const Eigen::VectorXd& row_w, const Eigen::VectorXd& col_w) {
        return static_cast<double>(row_w.transpose() * grid.values * col_w);
    };
    Eigen::VectorXd wx = (w.array() * coords.array()).matrix();
    Eigen::VectorXd wxx = (w.array() * coords.array().square()).matrix();
    double norm = quad(w, w);
    double mx = quad(w, wx) / norm;
    double mp = quad(wx, w) / norm;
    double cxx = quad(w, wxx) / norm - mx * mx;
    double cpp = quad(wxx, w) / norm - mp * mp;
    double cxp = quad(wx, wx) / norm - mx * mp;
    return 0.5 * std::atan2(2.0 * cxp, cxx - cpp);
}

std::pair<double, double> operator_variances(const Mat& rho_osc) {
    int dim = static_cast<int>(rho_osc.rows());
    Mat a = annihilation(dim - 1);
    Mat x = (a + a.adjoint()) / std::sqrt(2.0);
    Mat p = complexd(0.0, 1.0) * (a.adjoint() - a) / std::sqrt(2.0);
    auto var = [&](const Mat& q) {
        double mean = (rho_osc * q).trace().real();
        double second = (rho_osc * q * q).trace().real();
        return second - mean * mean;
    };
    return {var(x), var(p)};
}

Eigen::VectorXd fock_populations(const Mat& rho_osc, int n_cut) {
    if (n_cut < 1 || n_cut > rho_osc.rows()) {
        throw DomainError("fock_populations: n_cut out of range");
    }
    return rho_osc.diagonal().head(n_cut).real();
}

MetricsReport compute_metrics(const Mat& rho_osc, const WignerGrid& grid,
                              double herald_probability, int n_cut) {
    MetricsReport r;
    WignerGrid windowed = window_wigner(grid, 0.95);
    r.wln = wln(windowed);
    r.wln_unwindowed = wln(grid);
    r.window_half = windowed.window_half;
    r.min_w = min_wigner(grid);
    std::tie(r.var_x, r.var_p) = quadrature_variances(grid);
    int dim = static_cast<int>(rho_osc.rows());
    double nbar = 0.0;
    for (int n = 0; n < dim; ++n) nbar += n * rho_osc(n, n).real();
    r.mean_phonon = nbar;
    r.herald_probability = herald_probability;
    r.fock_pops = fock_populations(rho_osc, std::min<int>(n_cut, dim));
    return r;
}

nlohmann::json metrics_json(const MetricsReport& report) {
    nlohmann::json pops = nlohmann::json::array();
    for (int i = 0; i < report.fock_pops.size(); ++i) pops.push_back(report.fock_pops(i));
    return {{"wln", report.wln},
            {"wln_unwindowed", report.wln_unwindowed},
            {"window_half", report.window_half},
            {"min_w", report.min_w},
            {"var_x", report.var_x},
            {"var_p", report.var_p},
            {"mean_phonon", report.mean_phonon},
            {"herald_probability", report.herald_probability},
            {"fock_populations", pops}};
}

std::string table_b1_csv(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    os.precision(6);
    os << "state,mode,wln,min_w\n";
    for (const auto& row : rows) {
        os << row.state << "," << row.mode << "," << row.wln << "," << row.min_w << "\n";
    }
    return os.str();
}

}  // namespace hybridosc
