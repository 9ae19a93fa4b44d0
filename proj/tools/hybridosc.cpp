#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hybridosc/analysis.hpp"
#include "hybridosc/config.hpp"
#include "hybridosc/errors.hpp"

namespace fs = std::filesystem;
using namespace hybridosc;

namespace {

struct CommonFlags {
    std::string preset;
    std::string config_path;
    bool noise = false;
    long shots = 0;  // 0: leave the config value alone
    bool have_seed = false;
    std::uint64_t seed = 0;
    int n_max = 0;
    std::string out_dir;
    std::string format;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--preset", flags.preset, "named parameter set (fig2b..fig4)");
    cmd->add_option("--config", flags.config_path, "key = value config file");
    cmd->add_flag("--noise", flags.noise, "enable thermal occupation and heating");
    cmd->add_option("--shots", flags.shots, "sampled mode with this many shots");
    cmd->add_option("--seed", flags.seed, "RNG seed")->each([&flags](const std::string&) {
        flags.have_seed = true;
    });
    cmd->add_option("--nmax", flags.n_max, "Fock space truncation");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--format", flags.format, "csv|json");
}

ExperimentConfig resolve_config(const CommonFlags& flags) {
    ExperimentConfig cfg;
    if (!flags.preset.empty()) cfg = apply_config_text(cfg, preset_text(flags.preset));
    if (!flags.config_path.empty()) cfg = apply_config_file(cfg, flags.config_path);
    if (flags.noise) cfg.noise.enabled = true;
    if (flags.shots != 0) cfg.shots = flags.shots;
    if (flags.have_seed) cfg.seed = flags.seed;
    if (flags.n_max != 0) cfg.params.n_max = flags.n_max;
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (!flags.format.empty()) cfg.format = flags.format;
    cfg.validate();
    return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write '" + path.string() + "'");
    out << text;
}

WignerGrid tomography_pipeline(const ExperimentConfig& cfg, const Mat& rho, CharGrid* chi_out) {
    CharGrid chi;
    if (cfg.shots > 0) {
        chi.beta_max = cfg.beta_max;
        chi.n = cfg.grid_n;
        chi.values.resize(cfg.grid_n, cfg.grid_n);
        for (int row = 0; row < cfg.grid_n; ++row) {
            for (int col = 0; col < cfg.grid_n; ++col) {
                complexd beta(chi.coord(col), chi.coord(row));
                std::uint64_t base = cfg.seed + 2ull * (row * cfg.grid_n + col);
                double re = char_fn_measured(rho, beta, false, cfg.shots, base).estimate;
                double im = char_fn_measured(rho, beta, true, cfg.shots, base + 1).estimate;
                chi.values(row, col) = complexd(re, im);
            }
        }
    } else {
        chi = char_grid_exact(rho, cfg.beta_max, cfg.grid_n);
    }
    if (chi_out != nullptr) *chi_out = chi;
    return reconstruct_wigner(chi, cfg.x_max, cfg.grid_m);
}

void write_run_outputs(const ExperimentConfig& cfg, const Sequence& seq, bool with_grids) {
    ExecutionOptions opts = exec_options(cfg);
    RunResult result = execute(seq, opts);
    nlohmann::json run = run_result_json(result, opts);
    run["config"] = cfg.to_json();
    if (cfg.shots > 0) {
        ShotSummary s = sample_herald(seq, opts, cfg.shots, cfg.seed);
        run["shot_summary"] = {{"shots", s.shots},
                               {"dark_counts", s.dark_counts},
                               {"p_exact", s.p_exact},
                               {"p_estimate", s.p_estimate},
                               {"stderr", s.stderr_normal}};
    }
    fs::path out(cfg.out_dir);
    write_file(out / "run.json", run.dump(2) + "\n");

    Mat rho = result.state.reduced_osc();
    CharGrid chi;
    WignerGrid w = tomography_pipeline(cfg, rho, &chi);
    MetricsReport metrics = compute_metrics(rho, w, result.herald_probability);
    nlohmann::json mj = metrics_json(metrics);
    mj["config"] = cfg.to_json();
    write_file(out / "metrics.json", mj.dump(2) + "\n");

    if (with_grids) {
        if (cfg.format == "json") {
            nlohmann::json cj = char_grid_json(chi);
            cj["config"] = cfg.to_json();
            nlohmann::json wj = wigner_grid_json(w);
            wj["config"] = cfg.to_json();
            write_file(out / "char_grid.json", cj.dump(2) + "\n");
            write_file(out / "wigner_grid.json", wj.dump(2) + "\n");
        } else {
            write_file(out / "char_grid.csv", char_grid_csv(chi));
            write_file(out / "wigner_grid.csv", wigner_grid_csv(w));
        }
    }
}

int count_circular_maxima(const Eigen::VectorXd& samples, double tol) {
    int n = static_cast<int>(samples.size());
    int count = 0;
    for (int i = 0; i < n; ++i) {
        double prev = samples((i + n - 1) % n);
        double next = samples((i + 1) % n);
        if (samples(i) > prev + tol && samples(i) > next + tol) ++count;
    }
    return count;
}

struct SweepFlags {
    std::string param;
    double from = 0.0;
    double to = 1.0;
    int points = 11;
    double beta_abs = 1.0;
};

void run_sweep(const ExperimentConfig& cfg, const SweepFlags& sweep) {
    if (sweep.points < 1) throw DomainError("sweep: points must be >= 1");
    std::vector<double> values;
    for (int i = 0; i < sweep.points; ++i) {
        values.push_back(sweep.points == 1
                             ? sweep.from
                             : sweep.from + (sweep.to - sweep.from) * i / (sweep.points - 1));
    }
    std::string header;
    nlohmann::json rows_json = nlohmann::json::array();
    std::ostringstream rows;
    rows.precision(12);

    for (double v : values) {
        ExperimentConfig point = cfg;
        if (sweep.param == "zeta_abs") {
            double arg = std::abs(point.params.zeta) > 0.0 ? std::arg(point.params.zeta) : 0.0;
            point.params.zeta = v * std::exp(complexd(0.0, arg));
        } else if (sweep.param == "duration") {
            point.params.nl_duration = v;
        } else if (sweep.param == "gamma") {
            point.params.gamma = v;
        } else if (sweep.param == "phi") {
            point.circuit = "arbitrary_two_constituent";
            point.params.kp = point.params.k;
            point.params.zetap = point.params.zeta * std::exp(complexd(0.0, 2.0 * v));
        } else if (sweep.param == "c") {
            point.circuit = "arbitrary_two_constituent";
            point.params.kp = point.params.k;
            point.params.zetap = v * point.params.zeta;
        } else {
            throw DomainError("sweep: param must be zeta_abs|duration|gamma|phi|c");
        }

        if (sweep.param == "phi") {
            header = "value,p_herald,maxima_count";
            RunResult r = execute(build_from_config(point), exec_options(point));
            Mat rho = r.state.reduced_osc();
            int samples = 360;
            Eigen::VectorXd mag(samples);
            for (int i = 0; i < samples; ++i) {
                double theta = 2.0 * M_PI * i / samples;
                mag(i) = std::abs(
                    char_fn_exact(rho, sweep.beta_abs * std::exp(complexd(0.0, theta))));
            }
            int maxima = count_circular_maxima(mag, 1e-9);
            rows << v << "," << r.herald_probability << "," << maxima << "\n";
            rows_json.push_back(
                {{"value", v}, {"p_herald", r.herald_probability}, {"maxima_count", maxima}});
        } else if (sweep.param == "c") {
            header = "value,p_herald,var_x,var_p";
            RunResult r = execute(build_from_config(point), exec_options(point));
            Mat rho = r.state.reduced_osc();
            WignerGrid w = tomography_pipeline(point, rho, nullptr);
            auto [vx, vp] = quadrature_variances(w);
            rows << v << "," << r.herald_probability << "," << vx << "," << vp << "\n";
            rows_json.push_back(
                {{"value", v}, {"p_herald", r.herald_probability}, {"var_x", vx}, {"var_p", vp}});
        } else {
            header = "value,p_even,p_odd";
            ExperimentConfig even = point, odd = point;
            even.params.even = true;
            odd.params.even = false;
            // a branch that never heralds is a zero on the curve, not a failure
            auto herald = [](const ExperimentConfig& c) {
                try {
                    return execute(build_from_config(c), exec_options(c)).herald_probability;
                } catch (const HeraldImpossibleError&) {
                    return 0.0;
                }
            };
            double p_even = herald(even);
            double p_odd = herald(odd);
            rows << v << "," << p_even << "," << p_odd << "\n";
            rows_json.push_back({{"value", v}, {"p_even", p_even}, {"p_odd", p_odd}});
        }
    }

    fs::path out(cfg.out_dir);
    if (cfg.format == "json") {
        nlohmann::json j = {{"param", sweep.param}, {"rows", rows_json}, {"config", cfg.to_json()}};
        write_file(out / "sweep.json", j.dump(2) + "\n");
    } else {
        write_file(out / "sweep.csv", header + "\n" + rows.str());
    }
}

void run_table(const ExperimentConfig& cfg, const std::string& name) {
    if (name != "tableB1") throw DomainError("table: name must be tableB1");
    std::vector<TableRow> table;
    for (bool even : {true, false}) {
        for (bool realistic : {false, true}) {
            ExperimentConfig point = cfg;
            point.circuit = "equal_superposition";
            point.params.k = 2;
            point.params.zeta = even ? 1.12 : 1.67;
            point.params.even = even;
            point.params.nl_duration = even ? 400e-6 : 600e-6;
            point.params.n_max = std::max(point.params.n_max, even ? 300 : 400);
            point.noise.nbar0 = 0.1;
            point.params.nbar = 0.1;
            point.noise.ndot = 300.0;
            point.noise.enabled = realistic;
            Sequence seq = build_from_config(point);
            if (realistic) {
                // mid-circuit readout window before tomography
                seq.instructions.push_back(WaitInstr{200e-6});
                seq.lines.push_back(0);
            }
            RunResult r = execute(seq, exec_options(point));
            Mat rho = r.state.reduced_osc();
            WignerGrid w = tomography_pipeline(point, rho, nullptr);
            MetricsReport m = compute_metrics(rho, w, r.herald_probability);
            table.push_back(
                {even ? "even" : "odd", realistic ? "realistic" : "ideal", m.wln, m.min_w});
        }
    }
    write_file(fs::path(cfg.out_dir) / "tableB1.csv", table_b1_csv(table));
}

int dispatch(int argc, char** argv) {
    CLI::App app{"harmonic-oscillator superposition simulator"};
    app.require_subcommand(1);

    CommonFlags flags;
    SweepFlags sweep;
    std::string table_name = "tableB1";

    CLI::App* cmd_run = app.add_subcommand("run", "execute a sequence and report metrics");
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "sweep one parameter");
    CLI::App* cmd_wigner = app.add_subcommand("wigner", "full tomography pipeline");
    CLI::App* cmd_table = app.add_subcommand("table", "reference WLN table");
    for (CLI::App* cmd : {cmd_run, cmd_sweep, cmd_wigner, cmd_table}) {
        add_common_flags(cmd, flags);
    }
    cmd_sweep->add_option("--param", sweep.param, "zeta_abs|duration|gamma|phi|c")->required();
    cmd_sweep->add_option("--from", sweep.from, "first value")->required();
    cmd_sweep->add_option("--to", sweep.to, "last value")->required();
    cmd_sweep->add_option("--points", sweep.points, "number of values")->required();
    cmd_sweep->add_option("--beta-abs", sweep.beta_abs, "|beta| for the phi-sweep chi scan");
    cmd_table->add_option("--name", table_name, "table identifier");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << nlohmann::json{{"error", e.what()}, {"stage", "config"}}.dump() << "\n";
        return 2;
    }

    ExperimentConfig cfg;
    try {
        cfg = resolve_config(flags);
        if (*cmd_sweep && sweep.param != "zeta_abs" && sweep.param != "duration" &&
            sweep.param != "gamma" && sweep.param != "phi" && sweep.param != "c") {
            throw DomainError("sweep: param must be zeta_abs|duration|gamma|phi|c");
        }
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}, {"stage", "config"}}.dump() << "\n";
        return 2;
    }

    try {
        if (*cmd_run) {
            write_run_outputs(cfg, build_from_config(cfg), false);
        } else if (*cmd_wigner) {
            write_run_outputs(cfg, build_from_config(cfg), true);
        } else if (*cmd_sweep) {
            run_sweep(cfg, sweep);
        } else if (*cmd_table) {
            run_table(cfg, table_name);
        }
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}, {"stage", "run"}}.dump() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
