#include "hybridosc/config.hpp"

#include "hybridosc/errors.hpp"

namespace hybridosc {

namespace {

struct Preset {
    const char* name;
    const char* text;
};

// Reference parameter sets; k >= 3 entries relax the truncation guard since
// those interactions carry slowly decaying Fock tails at any feasible n_max.
const Preset kPresets[] = {
    {"fig2b",
     "circuit = equal_superposition\n"
     "k = 2\nzeta = 1.12\nparity = even\nnl_duration = 400e-6\n"
     "n_max = 300\nnbar = 0.1\nndot = 300\n"},
    {"fig2c",
     "circuit = equal_superposition\n"
     "k = 2\nzeta = 1.67\nparity = odd\nnl_duration = 600e-6\n"
     "n_max = 400\nnbar = 0.1\nndot = 300\n"},
    {"fig2d",
     "circuit = equal_superposition\n"
     "k = 3\nzeta = 0.74\nparity = even\nno_echo = true\nnl_duration = 500e-6\n"
     "n_max = 500\nnbar = 0.1\nndot = 300\nleak_tol = 1e-2\n"},
    {"fig2e",
     "circuit = equal_superposition\n"
     "k = 3\nzeta = 0.74\nparity = odd\nno_echo = true\nnl_duration = 500e-6\n"
     "n_max = 500\nnbar = 0.1\nndot = 300\nleak_tol = 1e-2\n"},
    {"fig2f",
     "circuit = equal_superposition\n"
     "k = 4\nzeta = 0.059\nparity = even\nnl_duration = 600e-6\n"
     "n_max = 400\nnbar = 0.1\nndot = 300\nleak_tol = 1e-2\n"},
    {"fig2g",
     "circuit = equal_superposition\n"
     "k = 4\nzeta = 0.16\nparity = odd\nnl_duration = 400e-6\n"
     "n_max = 500\nnbar = 0.1\nndot = 300\nleak_tol = 1e-2\n"},
    {"fig3e",
     "circuit = arbitrary_two_constituent\n"
     "k = 2\nzeta = 1.12\nkp = 3\nzetap = 0.25\nnl_duration = 200e-6\n"
     "n_max = 400\nnbar = 0.1\nndot = 300\nleak_tol = 1e-2\n"},
    {"fig4",
     "circuit = squeezed_cat\n"
     "k = 2\nzeta = 1.25\nalpha = 1.62\nnl_duration = 200e-6\nsdf_duration = 108.6e-6\n"
     "n_max = 400\nnbar = 0.1\nndot = 300\n"},
};

}  // namespace

std::string preset_text(const std::string& name) {
    for (const Preset& p : kPresets) {
        if (name == p.name) return p.text;
    }
    throw DomainError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const Preset& p : kPresets) names.emplace_back(p.name);
    return names;
}

}  // namespace hybridosc
