#include "hybridosc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hybridosc/errors.hpp"

namespace hybridosc {

namespace {

bool parse_bool(const std::string& s, int line, int col) {
    if (s == "true" || s == "on" || s == "1") return true;
    if (s == "false" || s == "off" || s == "0") return false;
    throw ParseError(line, col, "expected a boolean, got '" + s + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
    if (params.n_max < 1) throw DomainError("config: n_max must be >= 1");
    if (params.nbar < 0.0 || noise.nbar0 < 0.0) throw DomainError("config: nbar must be >= 0");
    if (noise.ndot < 0.0) throw DomainError("config: ndot must be >= 0");
    if (grid_n < 3 || grid_n % 2 == 0) throw DomainError("config: grid_n must be odd and >= 3");
    if (grid_m < 3) throw DomainError("config: grid_m must be >= 3");
    if (beta_max <= 0.0 || x_max <= 0.0) throw DomainError("config: grid extents must be > 0");
    if (format != "csv" && format != "json") throw DomainError("config: format must be csv|json");
    if (shots == 0) throw DomainError("config: shots must be nonzero (< 0 for exact mode)");
    if (sequence_path.empty() && circuit != "equal_superposition" &&
        circuit != "arbitrary_two_constituent" && circuit != "squeezed_cat") {
        throw DomainError("config: unknown circuit '" + circuit + "'");
    }
}

nlohmann::json ExperimentConfig::to_json() const {
    return {{"circuit", circuit},
            {"sequence", sequence_path},
            {"k", params.k},
            {"zeta", {params.zeta.real(), params.zeta.imag()}},
            {"parity", params.even ? "even" : "odd"},
            {"no_echo", params.no_echo},
            {"kp", params.kp},
            {"zetap", {params.zetap.real(), params.zetap.imag()}},
            {"theta", params.theta},
            {"gamma", params.gamma},
            {"alpha", {params.alpha.real(), params.alpha.imag()}},
            {"nl_duration", params.nl_duration},
            {"sdf_duration", params.sdf_duration},
            {"n_max", params.n_max},
            {"nbar", params.nbar},
            {"noise", noise.enabled},
            {"nbar0", noise.nbar0},
            {"ndot", noise.ndot},
            {"use_model", use_model},
            {"leak_tol", leak_tol},
            {"shots", shots},
            {"seed", seed},
            {"beta_max", beta_max},
            {"grid_n", grid_n},
            {"x_max", x_max},
            {"grid_m", grid_m},
            {"out", out_dir},
            {"format", format}};
}

ExperimentConfig apply_config_text(ExperimentConfig base, const std::string& text) {
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = raw.substr(0, raw.find('#'));
        // strip and split on '='
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            size_t b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        if (trim(line).empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(line_no, 1, "expected key = value, got '" + trim(line) + "'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        int col = static_cast<int>(eq) + 2;
        if (key.empty()) throw ParseError(line_no, 1, "missing key before '='");
        if (value.empty()) throw ParseError(line_no, col, "missing value for '" + key + "'");

        if (key == "circuit") {
            base.circuit = value;
        } else if (key == "sequence") {
            base.sequence_path = value;
        } else if (key == "k") {
            base.params.k = static_cast<int>(parse_integer(value, line_no, col));
        } else if (key == "zeta") {
            base.params.zeta = parse_complex(value, line_no, col);
        } else if (key == "parity") {
            if (value != "even" && value != "odd") {
                throw ParseError(line_no, col, "parity must be even|odd");
            }
            base.params.even = value == "even";
        } else if (key == "no_echo") {
            base.params.no_echo = parse_bool(value, line_no, col);
        } else if (key == "kp") {
            base.params.kp = static_cast<int>(parse_integer(value, line_no, col));
        } else if (key == "zetap") {
            base.params.zetap = parse_complex(value, line_no, col);
        } else if (key == "theta") {
            base.params.theta = parse_angle(value, line_no, col);
        } else if (key == "gamma") {
            base.params.gamma = parse_angle(value, line_no, col);
        } else if (key == "alpha") {
            base.params.alpha = parse_complex(value, line_no, col);
        } else if (key == "nl_duration") {
            base.params.nl_duration = parse_number(value, line_no, col);
        } else if (key == "sdf_duration") {
            base.params.sdf_duration = parse_number(value, line_no, col);
        } else if (key == "n_max") {
            base.params.n_max = static_cast<int>(parse_integer(value, line_no, col));
        } else if (key == "nbar") {
            base.params.nbar = parse_number(value, line_no, col);
            base.noise.nbar0 = base.params.nbar;
        } else if (key == "ndot") {
            base.noise.ndot = parse_number(value, line_no, col);
        } else if (key == "noise") {
            base.noise.enabled = parse_bool(value, line_no, col);
        } else if (key == "use_model") {
            base.use_model = parse_bool(value, line_no, col);
        } else if (key == "leak_tol") {
            base.leak_tol = parse_number(value, line_no, col);
        } else if (key == "shots") {
            base.shots = parse_integer(value, line_no, col);
        } else if (key == "seed") {
            base.seed = static_cast<std::uint64_t>(parse_integer(value, line_no, col));
        } else if (key == "beta_max") {
            base.beta_max = parse_number(value, line_no, col);
        } else if (key == "grid_n") {
            base.grid_n = static_cast<int>(parse_integer(value, line_no, col));
        } else if (key == "x_max") {
            base.x_max = parse_number(value, line_no, col);
        } else if (key == "grid_m") {
            base.grid_m = static_cast<int>(parse_integer(value, line_no, col));
        } else if (key == "out") {
            base.out_dir = value;
        } else if (key == "format") {
            base.format = value;
        } else {
            throw ParseError(line_no, 1, "unknown key '" + key + "'");
        }
    }
    return base;
}

ExperimentConfig apply_config_file(ExperimentConfig base, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return apply_config_text(std::move(base), buf.str());
}

Sequence build_from_config(const ExperimentConfig& config) {
    Sequence seq;
    if (!config.sequence_path.empty()) {
        std::ifstream in(config.sequence_path);
        if (!in) throw DomainError("config: cannot open '" + config.sequence_path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        seq = parse_sequence(buf.str());
    } else {
        seq = build_named_circuit(config.circuit, config.params);
    }
    seq.noise = config.noise;
    return seq;
}

ExecutionOptions exec_options(const ExperimentConfig& config) {
    ExecutionOptions opts;
    opts.noisy = config.noise.enabled;
    opts.use_model = config.use_model;
    opts.leak_tol = config.leak_tol;
    return opts;
}

}  // namespace hybridosc
