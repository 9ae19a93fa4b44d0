#include "hybridosc/sequence.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "hybridosc/rng.hpp"

namespace hybridosc {

namespace {

// ---------------------------------------------------------------- parsing

struct Field {
    std::string value;
    int col = 0;
    bool used = false;
};

struct LineFields {
    int line;
    std::map<std::string, Field> fields;

    const Field& require(const std::string& key) const {
        auto it = fields.find(key);
        if (it == fields.end()) {
            throw ParseError(line, 1, "missing required key '" + key + "'");
        }
        const_cast<Field&>(it->second).used = true;
        return it->second;
    }
    const Field* optional(const std::string& key) const {
        auto it = fields.find(key);
        if (it == fields.end()) return nullptr;
        const_cast<Field&>(it->second).used = true;
        return &it->second;
    }
    void finish() const {
        for (const auto& [key, f] : fields) {
            if (!f.used) throw ParseError(line, f.col, "unexpected key '" + key + "'");
        }
    }
};

}  // namespace

double parse_number(const std::string& s, int line, int col) {
    const char* begin = s.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ParseError(line, col, "expected a number, got '" + s + "'");
    }
    return v;
}

long parse_integer(const std::string& s, int line, int col) {
    const char* begin = s.c_str();
    char* end = nullptr;
    long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0') {
        throw ParseError(line, col, "expected an integer, got '" + s + "'");
    }
    return v;
}

/// pi-expressions: pi, -pi, 2pi, 0.5pi, pi/2, 3pi/4, 2*pi/3, or a plain number.
double parse_angle(const std::string& s, int line, int col) {
    size_t at = s.find("pi");
    if (at == std::string::npos) return parse_number(s, line, col);
    std::string pre = s.substr(0, at);
    std::string post = s.substr(at + 2);
    double coeff = 1.0;
    if (!pre.empty() && pre.back() == '*') pre.pop_back();
    if (pre == "-") {
        coeff = -1.0;
    } else if (!pre.empty() && pre != "+") {
        coeff = parse_number(pre, line, col);
    }
    double divisor = 1.0;
    if (!post.empty()) {
        if (post[0] != '/') throw ParseError(line, col, "malformed pi-expression '" + s + "'");
        divisor = parse_number(post.substr(1), line, col);
        if (divisor == 0.0) throw ParseError(line, col, "division by zero in '" + s + "'");
    }
    return coeff * M_PI / divisor;
}

/// a, a+bi, a-bi, bi, i, -i
complexd parse_complex(const std::string& s, int line, int col) {
    if (s.empty()) throw ParseError(line, col, "expected a complex number");
    if (s.back() != 'i') return complexd(parse_number(s, line, col), 0.0);
    std::string body = s.substr(0, s.size() - 1);
    // split at the last sign that is not an exponent sign and not leading
    size_t split = std::string::npos;
    for (size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto imag_part = [&](std::string t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_number(t, line, col);
    };
    if (split == std::string::npos) return complexd(0.0, imag_part(body));
    return complexd(parse_number(body.substr(0, split), line, col),
                    imag_part(body.substr(split)));
}

namespace {

PauliAxis parse_axis_letter(const std::string& s, int line, int col, bool allow_z) {
    if (s == "x") return PauliAxis::X;
    if (s == "y") return PauliAxis::Y;
    if (s == "z" && allow_z) return PauliAxis::Z;
    throw ParseError(line, col, std::string("expected axis ") + (allow_z ? "x|y|z" : "x|y") +
                                    ", got '" + s + "'");
}

}  // namespace

Sequence parse_sequence(const std::string& text) {
    Sequence seq;
    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        size_t hash = raw.find('#');
        std::string body = (hash == std::string::npos) ? raw : raw.substr(0, hash);

        // tokenize: first word is the instruction name, the rest key=value
        LineFields lf{line_no, {}};
        std::string name;
        size_t pos = 0;
        while (pos < body.size()) {
            while (pos < body.size() && std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
            size_t start = pos;
            while (pos < body.size() && !std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
            if (start == pos) break;
            std::string tok = body.substr(start, pos - start);
            int col = static_cast<int>(start) + 1;
            if (name.empty()) {
                name = tok;
                continue;
            }
            size_t eq = tok.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw ParseError(line_no, col, "expected key=value, got '" + tok + "'");
            }
            std::string key = tok.substr(0, eq);
            if (lf.fields.count(key)) throw ParseError(line_no, col, "duplicate key '" + key + "'");
            lf.fields[key] = Field{tok.substr(eq + 1), col, false};
        }
        if (name.empty()) continue;

        Instruction instr;
        if (name == "init") {
            InitInstr in;
            in.nbar = parse_number(lf.require("nbar").value, line_no, lf.require("nbar").col);
            in.n_max = static_cast<int>(
                parse_integer(lf.require("nmax").value, line_no, lf.require("nmax").col));
            in.spin_dim = static_cast<int>(
                parse_integer(lf.require("spin").value, line_no, lf.require("spin").col));
            in.spin_level = static_cast<int>(
                parse_integer(lf.require("level").value, line_no, lf.require("level").col));
            if (in.spin_dim != 2 && in.spin_dim != 3) {
                throw ParseError(line_no, lf.require("spin").col, "spin must be 2 or 3");
            }
            if (in.spin_level < 0 || in.spin_level >= in.spin_dim) {
                throw ParseError(line_no, lf.require("level").col, "level out of range");
            }
            if (in.nbar < 0.0 || in.n_max < 1) {
                throw ParseError(line_no, 1, "init requires nbar >= 0 and nmax >= 1");
            }
            instr = in;
        } else if (name == "rot") {
            RotInstr r;
            const Field& pair = lf.require("pair");
            if (pair.value.size() != 2 || !std::isdigit((unsigned char)pair.value[0]) ||
                !std::isdigit((unsigned char)pair.value[1])) {
                throw ParseError(line_no, pair.col, "expected pair=<ij> with digits");
            }
            r.i = pair.value[0] - '0';
            r.j = pair.value[1] - '0';
            if (r.i == r.j || r.i > 2 || r.j > 2) {
                throw ParseError(line_no, pair.col, "pair levels must be distinct and in 0..2");
            }
            const Field& axis = lf.require("axis");
            if (axis.value == "x") {
                r.gamma = 0.0;
            } else if (axis.value == "y") {
                r.gamma = M_PI / 2.0;
            } else {
                r.gamma = parse_angle(axis.value, line_no, axis.col);
            }
            r.theta = parse_angle(lf.require("theta").value, line_no, lf.require("theta").col);
            instr = r;
        } else if (name == "nl") {
            NonlinearInstr n;
            n.spec.k = static_cast<int>(
                parse_integer(lf.require("k").value, line_no, lf.require("k").col));
            if (n.spec.k < 1 || n.spec.k > 4) {
                throw ParseError(line_no, lf.require("k").col, "k must be in 1..4");
            }
            complexd zeta =
                parse_complex(lf.require("zeta").value, line_no, lf.require("zeta").col);
            double phi = 0.0;
            if (const Field* f = lf.optional("phi")) phi = parse_angle(f->value, line_no, f->col);
            n.spec.zeta = zeta * std::exp(complexd(0.0, phi));
            const Field& cond = lf.require("cond");
            n.spec.cond_basis = parse_axis_letter(cond.value, line_no, cond.col, true);
            if (const Field* f = lf.optional("echo")) {
                if (n.spec.cond_basis != PauliAxis::Z) {
                    throw ParseError(line_no, f->col, "echo requires cond=z");
                }
                n.spec.echo_gamma =
                    (parse_axis_letter(f->value, line_no, f->col, false) == PauliAxis::X)
                        ? 0.0
                        : M_PI / 2.0;
            }
            n.duration = parse_number(lf.require("dur").value, line_no, lf.require("dur").col);
            if (n.duration < 0.0) throw ParseError(line_no, lf.require("dur").col, "dur >= 0");
            instr = n;
        } else if (name == "sdf") {
            SdfDisplaceInstr s;
            const Field& axis = lf.require("axis");
            s.axis = parse_axis_letter(axis.value, line_no, axis.col, true);
            s.alpha = parse_complex(lf.require("alpha").value, line_no, lf.require("alpha").col);
            s.duration = parse_number(lf.require("dur").value, line_no, lf.require("dur").col);
            if (s.duration < 0.0) throw ParseError(line_no, lf.require("dur").col, "dur >= 0");
            instr = s;
        } else if (name == "wait") {
            WaitInstr w;
            w.duration = parse_number(lf.require("dur").value, line_no, lf.require("dur").col);
            if (w.duration < 0.0) throw ParseError(line_no, lf.require("dur").col, "dur >= 0");
            instr = w;
        } else if (name == "measure") {
            MeasureInstr m;
            const Field& herald = lf.require("herald");
            if (herald.value == "dark") {
                m.herald_dark = true;
            } else if (herald.value == "bright") {
                m.herald_dark = false;
            } else {
                throw ParseError(line_no, herald.col, "expected herald=dark|bright");
            }
            if (const Field* f = lf.optional("model")) {
                if (f->value != "reference" && f->value != "default") {
                    throw ParseError(line_no, f->col, "unknown detection model '" + f->value + "'");
                }
                m.model = DetectionModel{};
            }
            instr = m;
        } else {
            throw ParseError(line_no, 1, "unknown instruction '" + name + "'");
        }
        lf.finish();

        if (seq.instructions.empty() && !std::holds_alternative<InitInstr>(instr)) {
            throw ParseError(line_no, 1, "sequence must begin with init");
        }
        if (!seq.instructions.empty() && std::holds_alternative<InitInstr>(instr)) {
            throw ParseError(line_no, 1, "init is only allowed as the first instruction");
        }
        seq.instructions.push_back(std::move(instr));
        seq.lines.push_back(line_no);
    }
    if (seq.instructions.empty()) throw ParseError(1, 1, "sequence must begin with init");
    return seq;
}

// ---------------------------------------------------------------- executor

namespace {

struct Executor {
    const Sequence& seq;
    const ExecutionOptions& opts;
    double ndot = 0.0;

    int spin_dim = 0, n_max = 0, od = 0, dim = 0;
    bool pure = false;
    Vec psi;
    std::optional<HybridState> rho;

    RunResult run();

    void apply_unitary(const Mat& u) {
        if (pure) {
            psi = u * psi;
        } else {
            rho = HybridState(spin_dim, n_max, u * rho->rho() * u.adjoint());
        }
    }

    void heat(double t) {
        if (t <= 0.0 || ndot <= 0.0) return;
        rho = apply_heating(*rho, ndot, t, 0, opts.leak_tol);
    }

    // unitary sandwiched between half-duration heating segments
    void apply_timed(const Mat& u, double t) {
        heat(t / 2.0);
        apply_unitary(u);
        heat(t / 2.0);
    }

    double dark_probability() const {
        if (pure) return psi.segment(od, od).squaredNorm();
        return rho->rho().block(od, od, od, od).trace().real();
    }

    void project(bool dark) {
        if (pure) {
            Vec kept = Vec::Zero(dim);
            if (dark) {
                kept.segment(od, od) = psi.segment(od, od);
            } else {
                kept = psi;
                kept.segment(od, od).setZero();
            }
            psi = kept / kept.norm();
        } else {
            Mat r = rho->rho();
            if (dark) {
                Mat block = Mat::Zero(dim, dim);
                block.block(od, od, od, od) = r.block(od, od, od, od);
                r = block;
            } else {
                r.middleRows(od, od).setZero();
                r.middleCols(od, od).setZero();
            }
            rho = HybridState(spin_dim, n_max, r / r.trace());
        }
    }
};

RunResult Executor::run() {
    RunResult result{HybridState::ground(2, 1, 0), 1.0, {}, 0.0};
    bool first = true;
    for (const Instruction& instr : seq.instructions) {
        if (first) {
            const auto* in = std::get_if<InitInstr>(&instr);
            if (in == nullptr) throw DomainError("execute: sequence must begin with init");
            spin_dim = in->spin_dim;
            n_max = in->n_max;
            od = n_max + 1;
            dim = spin_dim * od;
            double nbar = 0.0;
            if (opts.noisy) {
                nbar = in->nbar;
                if (seq.noise.enabled) nbar = std::max(nbar, seq.noise.nbar0);
            }
            pure = !opts.noisy && !opts.use_model;
            if (pure) {
                psi = Vec::Zero(dim);
                psi(in->spin_level * od) = 1.0;
            } else {
                rho = HybridState::ground(spin_dim, n_max, in->spin_level, nbar);
            }
            first = false;
            continue;
        }
        if (const auto* r = std::get_if<RotInstr>(&instr)) {
            apply_unitary(spin_rotation_unitary(spin_dim, n_max, r->i, r->j, r->gamma, r->theta));
        } else if (const auto* n = std::get_if<NonlinearInstr>(&instr)) {
            if (n->spec.echo_gamma) {
                EchoArms arms = wrap_spin_echo(n->spec, *n->spec.echo_gamma);
                apply_timed(conditioned_nonlinear_unitary(spin_dim, n_max, arms.first,
                                                          opts.leak_tol),
                            n->duration / 2.0);
                apply_unitary(
                    spin_rotation_unitary(spin_dim, n_max, 0, 1, arms.pi_axis_gamma, M_PI));
                apply_timed(conditioned_nonlinear_unitary(spin_dim, n_max, arms.second,
                                                          opts.leak_tol),
                            n->duration / 2.0);
            } else {
                apply_timed(conditioned_nonlinear_unitary(spin_dim, n_max, n->spec, opts.leak_tol),
                            n->duration);
            }
            result.elapsed += n->duration;
        } else if (const auto* s = std::get_if<SdfDisplaceInstr>(&instr)) {
            Eigen::Matrix2cd sigma = (s->axis == PauliAxis::Z)
                                         ? pauli(PauliAxis::Z)
                                         : pauli_xy(s->axis == PauliAxis::X ? 0.0 : M_PI / 2.0);
            apply_timed(
                conditioned_displacement_unitary(spin_dim, n_max, sigma, s->alpha, opts.leak_tol),
                s->duration);
            result.elapsed += s->duration;
        } else if (const auto* w = std::get_if<WaitInstr>(&instr)) {
            heat(w->duration);
            result.elapsed += w->duration;
        } else if (const auto* m = std::get_if<MeasureInstr>(&instr)) {
            double p_dark = dark_probability();
            double p_sel = m->herald_dark ? p_dark : 1.0 - p_dark;
            if (p_sel < 1e-15) throw HeraldImpossibleError("herald probability below 1e-15");
            result.measure_probs.push_back(p_sel);
            result.herald_probability *= p_sel;
            const DetectionModel* model = nullptr;
            if (opts.use_model) model = m->model ? &*m->model : &opts.model;
            if (model != nullptr) {
                rho = herald_mixture(*rho, m->herald_dark, *model);
                if (opts.noisy) heat(model->readout_duration);
                result.elapsed += model->readout_duration;
            } else {
                project(m->herald_dark);
            }
        } else {
            throw DomainError("execute: init is only allowed as the first instruction");
        }
    }
    if (first) throw DomainError("execute: empty sequence");
    result.state = pure ? HybridState::from_pure(spin_dim, n_max, psi) : *rho;
    result.state.check_leakage(opts.leak_tol);
    return result;
}

}  // namespace

RunResult execute(const Sequence& seq, const ExecutionOptions& opts) {
    Executor ex{seq, opts};
    ex.ndot = (opts.noisy && seq.noise.enabled) ? seq.noise.ndot : 0.0;
    return ex.run();
}

HybridState herald_mixture(const HybridState& pre, bool herald_dark, const DetectionModel& model) {
    int od = pre.osc_dim();
    int dim = pre.dim();
    Mat dark = Mat::Zero(dim, dim);
    dark.block(od, od, od, od) = pre.rho().block(od, od, od, od);
    Mat bright = pre.rho();
    bright.middleRows(od, od).setZero();
    bright.middleCols(od, od).setZero();

    DetectionErrorProbs p = detection_error_probs(model);
    double p_dark_dark = 1.0 - p.p_bright_given_dark - p.p_lifetime_flip;
    double p_dark_bright = p.p_dark_given_bright;
    Mat mix;
    if (herald_dark) {
        mix = p_dark_dark * dark + p_dark_bright * bright;
    } else {
        mix = (1.0 - p_dark_bright) * bright + (1.0 - p_dark_dark) * dark;
    }
    return HybridState(pre.spin_dim(), pre.n_max(), mix / mix.trace());
}

Sequence build_named_circuit(const std::string& name, const CircuitParams& p) {
    Sequence seq;
    auto add = [&seq](Instruction instr) {
        seq.instructions.push_back(std::move(instr));
        seq.lines.push_back(0);
    };

    if (name == "equal_superposition") {
        if (p.no_echo) {
            // conditioned-x variant: the init level picks the heralded parity
            add(InitInstr{p.nbar, p.n_max, 2, p.even ? 1 : 0});
            add(NonlinearInstr{NonlinearSpec{p.k, p.zeta, PauliAxis::X, {}}, p.nl_duration});
            add(MeasureInstr{true, {}});
        } else {
            add(InitInstr{p.nbar, p.n_max, 2, 0});
            add(RotInstr{0, 1, M_PI / 2, p.theta});
            NonlinearSpec nl{p.k, p.zeta, PauliAxis::Z,
                             (p.even ? 0.0 : M_PI / 2.0) + p.gamma};
            add(NonlinearInstr{nl, p.nl_duration});
            add(RotInstr{0, 1, M_PI / 2, M_PI / 2});
            add(MeasureInstr{true, {}});
        }
    } else if (name == "arbitrary_two_constituent") {
        add(InitInstr{p.nbar, p.n_max, 3, 0});
        add(RotInstr{0, 2, M_PI / 2, p.theta});
        add(NonlinearInstr{NonlinearSpec{p.k, p.zeta, PauliAxis::Z, {}}, p.nl_duration});
        // hide the first constituent; the swap axis carries the phase control
        add(RotInstr{0, 2, M_PI / 2 + p.gamma, M_PI});
        add(NonlinearInstr{NonlinearSpec{p.kp, p.zetap, PauliAxis::Z, {}}, p.nl_duration});
        add(RotInstr{0, 2, M_PI / 2, M_PI / 2});
        add(RotInstr{0, 1, M_PI / 2, M_PI});  // shelve so the dark outcome heralds
        add(MeasureInstr{true, {}});
    } else if (name == "squeezed_cat") {
        add(InitInstr{p.nbar, p.n_max, 2, 0});
        add(RotInstr{0, 1, M_PI / 2, M_PI / 2});
        add(NonlinearInstr{NonlinearSpec{2, p.zeta, PauliAxis::Z, 0.0}, p.nl_duration});
        add(RotInstr{0, 1, M_PI / 2, M_PI / 2});
        add(MeasureInstr{true, {}});
        add(SdfDisplaceInstr{PauliAxis::X, p.alpha, p.sdf_duration});
        add(MeasureInstr{true, {}});
    } else {
        throw DomainError("build_named_circuit: unknown circuit '" + name + "'");
    }
    return seq;
}

ShotSummary sample_herald(const Sequence& seq, const ExecutionOptions& opts, long shots,
                          std::uint64_t seed) {
    if (shots <= 0) throw DomainError("sample_herald: shots must be positive");
    RunResult result = execute(seq, opts);
    std::uint64_t state = derive_stream(seed, 0);
    ShotSummary s;
    s.shots = shots;
    s.p_exact = result.herald_probability;
    s.dark_counts = binomial_draw(shots, s.p_exact, state);
    s.p_estimate = static_cast<double>(s.dark_counts) / static_cast<double>(shots);
    s.stderr_normal = std::sqrt(s.p_estimate * (1.0 - s.p_estimate) / static_cast<double>(shots));
    return s;
}

nlohmann::json run_result_json(const RunResult& result, const ExecutionOptions& opts) {
    Eigen::VectorXd spin = result.state.spin_populations();
    Eigen::VectorXd fock = result.state.fock_populations();
    nlohmann::json j;
    j["herald_probability"] = result.herald_probability;
    j["measure_probs"] = result.measure_probs;
    j["spin_probs"] = std::vector<double>(spin.data(), spin.data() + spin.size());
    j["fock_populations"] = std::vector<double>(fock.data(), fock.data() + fock.size());
    j["purity"] = result.state.purity();
    j["mean_phonon"] = result.state.mean_phonon();
    j["elapsed"] = result.elapsed;
    j["options"] = {{"noisy", opts.noisy},
                    {"use_model", opts.use_model},
                    {"leak_tol", opts.leak_tol}};
    return j;
}

}  // namespace hybridosc
