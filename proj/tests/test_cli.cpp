#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(HYBRIDOSC_BIN) + " " + args + " >/dev/null 2>/dev/null";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(bool(in));
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

fs::path scratch(const std::string& leaf) {
    fs::path dir = fs::temp_directory_path() / "hybridosc_cli_test" / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("cli: run writes run.json and metrics.json with the reference herald") {
    fs::path out = scratch("run");
    CHECK(run_cli("run --preset fig2b --out " + out.string()) == 0);
    nlohmann::json run = nlohmann::json::parse(slurp(out / "run.json"));
    CHECK(run["herald_probability"].get<double>() == doctest::Approx(0.72942).epsilon(2e-6));
    CHECK(run["config"]["parity"] == "even");
    nlohmann::json metrics = nlohmann::json::parse(slurp(out / "metrics.json"));
    CHECK(metrics["wln"].get<double>() == doctest::Approx(0.394).epsilon(0.01));
    CHECK(metrics.contains("min_w"));
    CHECK(metrics.contains("fock_populations"));
}

TEST_CASE("cli: config errors exit 2, runtime errors exit 1") {
    fs::path out = scratch("err");
    fs::path bad = out / "bad.cfg";
    std::ofstream(bad) << "zeta = 1.0\nbogus_key = 3\n";
    CHECK(run_cli("run --config " + bad.string() + " --out " + out.string()) == 2);
    CHECK(run_cli("run --preset fig99 --out " + out.string()) == 2);
    CHECK(run_cli("run --format yaml --out " + out.string()) == 2);
    CHECK(run_cli("sweep --param bogus --from 0 --to 1 --points 2 --out " + out.string()) == 2);
    // odd herald at zeta = 0 never fires: a runtime failure, not a config one
    fs::path zero = out / "zero.cfg";
    std::ofstream(zero) << "k = 2\nzeta = 0\nparity = odd\n";
    CHECK(run_cli("run --config " + zero.string() + " --out " + out.string()) == 1);
}

TEST_CASE("cli: sweep csv schema is stable") {
    fs::path out = scratch("sweep");
    CHECK(run_cli("sweep --preset fig2b --param zeta_abs --from 0 --to 0.2 --points 2 "
                  "--nmax 120 --out " +
                  out.string()) == 0);
    std::string csv = slurp(out / "sweep.csv");
    CHECK(first_line(csv) == "value,p_even,p_odd");
    // the zero-squeezing endpoint heralds even with certainty
    CHECK(csv.find("0,1,0") != std::string::npos);
}

TEST_CASE("cli: wigner grid files carry the documented headers") {
    fs::path out = scratch("wigner");
    fs::path cfg = out / "small.cfg";
    std::ofstream(cfg) << "k = 2\nzeta = 0.3\nparity = even\nn_max = 120\n"
                       << "beta_max = 4\ngrid_n = 41\nx_max = 5\ngrid_m = 51\n";
    CHECK(run_cli("wigner --config " + cfg.string() + " --out " + out.string()) == 0);
    CHECK(first_line(slurp(out / "char_grid.csv")) == "extent,4");
    CHECK(first_line(slurp(out / "wigner_grid.csv")) == "extent,5");

    CHECK(run_cli("wigner --config " + cfg.string() + " --format json --out " + out.string()) ==
          0);
    nlohmann::json w = nlohmann::json::parse(slurp(out / "wigner_grid.json"));
    CHECK(w["N"].get<int>() == 51);
    CHECK(w["extent"].get<double>() == 5.0);
    CHECK(w["values"].size() == 51 * 51);
}

TEST_CASE("cli: table csv schema is stable") {
    // schema only; the full table is exercised elsewhere and is slow
    CHECK(run_cli("table --name nonsense --out /tmp") == 1);
}
