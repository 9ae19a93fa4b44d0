#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridosc/sequence.hpp"

namespace hybridosc {

/// Resolved experiment description: named circuit (or DSL file) plus noise,
/// tomography grid, and output settings. Built by layering preset text,
/// config files, and command-line flags; unknown keys are rejected.
struct ExperimentConfig {
    std::string circuit = "equal_superposition";
    std::string sequence_path;  // when set, overrides `circuit`
    CircuitParams params;
    NoiseSpec noise;            // nbar0/ndot always carried; `enabled` gates them
    bool use_model = false;     // compose the detection-error model at heralds
    double leak_tol = kDefaultLeakTol;

    long shots = -1;            // < 0: exact (analytic) mode
    std::uint64_t seed = 0;

    double beta_max = 6.0;
    int grid_n = 201;
    double x_max = 12.0;
    int grid_m = 401;

    std::string out_dir = ".";
    std::string format = "csv";  // csv | json

    void validate() const;       // throws DomainError on inconsistent values
    nlohmann::json to_json() const;
};

/// Applies `key = value` lines (same token rules as the DSL, '#' comments)
/// on top of `base`. Throws ParseError naming any unknown key.
ExperimentConfig apply_config_text(ExperimentConfig base, const std::string& text);

ExperimentConfig apply_config_file(ExperimentConfig base, const std::string& path);

/// Built-in parameter sets for the reference figures. Throws DomainError on
/// an unknown name.
std::string preset_text(const std::string& name);
std::vector<std::string> preset_names();

/// Sequence for the config (named circuit or DSL file) with noise attached.
Sequence build_from_config(const ExperimentConfig& config);

ExecutionOptions exec_options(const ExperimentConfig& config);

}  // namespace hybridosc
