#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridosc/detection.hpp"
#include "hybridosc/evolution.hpp"

namespace hybridosc {

struct InitInstr {
    double nbar = 0.0;
    int n_max = 0;
    int spin_dim = 2;
    int spin_level = 0;
};

struct RotInstr {
    int i = 0, j = 1;
    double gamma = 0.0;  // rotation axis in the xy-plane
    double theta = 0.0;
};

struct NonlinearInstr {
    NonlinearSpec spec;
    double duration = 0.0;
};

struct SdfDisplaceInstr {
    PauliAxis axis = PauliAxis::X;
    complexd alpha{0.0, 0.0};  // sigma-eigenvalue +1 branch; the other gets -alpha
    double duration = 0.0;
};

struct WaitInstr {
    double duration = 0.0;
};

struct MeasureInstr {
    bool herald_dark = true;  // dark = spin level 1; bright = the complement
    std::optional<DetectionModel> model;
};

using Instruction =
    std::variant<InitInstr, RotInstr, NonlinearInstr, SdfDisplaceInstr, WaitInstr, MeasureInstr>;

struct Sequence {
    std::vector<Instruction> instructions;
    NoiseSpec noise;
    std::vector<int> lines;  // source line per instruction; 0 for generated code
};

/// DSL token parsers, shared with the config reader. line/col feed ParseError.
double parse_number(const std::string& s, int line, int col);
long parse_integer(const std::string& s, int line, int col);
double parse_angle(const std::string& s, int line, int col);
complexd parse_complex(const std::string& s, int line, int col);

/// Line-oriented DSL, '#' comments:
///   init nbar=<f> nmax=<int> spin=<2|3> level=<int>
///   rot pair=<ij> axis=<rad|x|y> theta=<rad>
///   nl k=<int> zeta=<complex> phi=<rad> cond=<x|y|z> [echo=<x|y>] dur=<s>
///   sdf axis=<x|y|z> alpha=<complex> dur=<s>
///   wait dur=<s>
///   measure herald=<dark|bright> [model=<name>]
/// Angles accept pi-expressions (pi, -pi/2, 3pi/4, 2pi); complex as a+bi.
Sequence parse_sequence(const std::string& text);

struct ExecutionOptions {
    bool noisy = false;      // enables init nbar, heating over durations
    bool use_model = false;  // detection-error mixture at Measure
    DetectionModel model{};
    double leak_tol = kDefaultLeakTol;
};

struct RunResult {
    HybridState state;                  // heralded final state, trace 1
    double herald_probability = 1.0;    // product of the ideal Tr(P rho) factors
    std::vector<double> measure_probs;  // one ideal herald probability per Measure
    double elapsed = 0.0;               // model time, s
};

/// Instruction-by-instruction evolution. Measure projects onto the herald
/// branch and renormalizes (or forms the detection-error mixture when a model
/// is in effect); herald probabilities always report the ideal Tr(P rho).
/// Runs on a pure state vector whenever the options permit it.
RunResult execute(const Sequence& seq, const ExecutionOptions& opts);

/// Detection-error herald mixture: the non-selected branch leaks in with the
/// misclassification probability of the model.
HybridState herald_mixture(const HybridState& pre, bool herald_dark, const DetectionModel& model);

struct CircuitParams {
    int n_max = 200;
    double nbar = 0.0;

    int k = 2;
    complexd zeta{0.0, 0.0};
    bool even = true;
    bool no_echo = false;  // conditioned-x variant, parity picked by init level

    int kp = 2;              // second constituent (arbitrary_two_constituent)
    complexd zetap{0.0, 0.0};
    double theta = M_PI / 2;  // amplitude control
    double gamma = 0.0;       // phase control (axis of the swap/echo pi pulse)

    complexd alpha{0.0, 0.0};  // squeezed_cat displacement

    double nl_duration = 400e-6;
    double sdf_duration = 108.6e-6;
};

/// Named circuits: "equal_superposition", "arbitrary_two_constituent",
/// "squeezed_cat". Throws DomainError on an unknown name.
Sequence build_named_circuit(const std::string& name, const CircuitParams& params);

/// Exact herald probability followed by a binomial draw; deterministic in the
/// seed. Estimate is dark_counts/shots.
struct ShotSummary {
    long shots = 0;
    long dark_counts = 0;
    double p_exact = 0.0;
    double p_estimate = 0.0;
    double stderr_normal = 0.0;
};
ShotSummary sample_herald(const Sequence& seq, const ExecutionOptions& opts, long shots,
                          std::uint64_t seed);

nlohmann::json run_result_json(const RunResult& result, const ExecutionOptions& opts);

}  // namespace hybridosc
