#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hybridosc/config.hpp"

using namespace hybridosc;

TEST_CASE("config: defaults and overrides layer") {
    ExperimentConfig base;
    ExperimentConfig cfg = apply_config_text(
        base,
        "# comment\n"
        "circuit = equal_superposition\n"
        "zeta = 1.12\n"
        "parity = odd\n"
        "theta = pi/2\n"
        "gamma = -pi/4\n"
        "shots = 300\n"
        "beta_max = 5\n");
    CHECK(cfg.params.zeta == complexd(1.12, 0.0));
    CHECK_FALSE(cfg.params.even);
    CHECK(cfg.params.theta == doctest::Approx(M_PI / 2));
    CHECK(cfg.params.gamma == doctest::Approx(-M_PI / 4));
    CHECK(cfg.shots == 300);
    CHECK(cfg.beta_max == 5.0);
    // untouched keys keep their defaults
    CHECK(cfg.grid_n == 201);
    CHECK(cfg.format == "csv");

    ExperimentConfig again = apply_config_text(cfg, "parity = even\n");
    CHECK(again.params.even);
    CHECK(again.shots == 300);
}

TEST_CASE("config: unknown and malformed keys are diagnosed") {
    ExperimentConfig base;
    CHECK_THROWS_WITH_AS(apply_config_text(base, "zeta = 1.0\nbogus_key = 3\n"),
                         doctest::Contains("bogus_key"), ParseError);
    try {
        apply_config_text(base, "\nnot a line\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(apply_config_text(base, "parity = sideways\n"), ParseError);
    CHECK_THROWS_AS(apply_config_text(base, "shots = many\n"), ParseError);
    CHECK_THROWS_AS(apply_config_text(base, "noise = maybe\n"), ParseError);
}

TEST_CASE("config: validation") {
    ExperimentConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK_THROWS_AS(apply_config_text(cfg, "grid_n = 200\n").validate(), DomainError);
    CHECK_THROWS_AS(apply_config_text(cfg, "format = yaml\n").validate(), DomainError);
    CHECK_THROWS_AS(apply_config_text(cfg, "circuit = nonsense\n").validate(), DomainError);
    CHECK_THROWS_AS(apply_config_text(cfg, "shots = 0\n").validate(), DomainError);
}

TEST_CASE("presets: catalogue and layering") {
    CHECK(preset_names().size() == 8);
    ExperimentConfig cfg = apply_config_text({}, preset_text("fig2b"));
    CHECK(cfg.circuit == "equal_superposition");
    CHECK(cfg.params.k == 2);
    CHECK(cfg.params.zeta == complexd(1.12, 0.0));
    CHECK(cfg.params.even);
    CHECK(cfg.params.nl_duration == doctest::Approx(400e-6));
    CHECK(cfg.noise.nbar0 == doctest::Approx(0.1));
    CHECK(cfg.noise.ndot == doctest::Approx(300.0));
    CHECK_FALSE(cfg.noise.enabled);  // armed by the noise flag, not the preset

    ExperimentConfig cat = apply_config_text({}, preset_text("fig4"));
    CHECK(cat.circuit == "squeezed_cat");
    CHECK(cat.params.alpha == complexd(1.62, 0.0));
    CHECK(cat.params.sdf_duration == doctest::Approx(108.6e-6));

    CHECK_THROWS_AS(preset_text("fig99"), DomainError);
}

TEST_CASE("preset fig2b runs to the reference herald probability") {
    ExperimentConfig cfg = apply_config_text({}, preset_text("fig2b"));
    cfg.validate();
    RunResult result = execute(build_from_config(cfg), exec_options(cfg));
    CHECK(result.herald_probability == doctest::Approx(0.72942).epsilon(1e-5));
}

TEST_CASE("config json round-trips every key") {
    ExperimentConfig cfg = apply_config_text({}, preset_text("fig3e"));
    nlohmann::json j = cfg.to_json();
    for (const char* key :
         {"circuit", "k", "zeta", "parity", "kp", "zetap", "theta", "gamma", "alpha",
          "nl_duration", "sdf_duration", "n_max", "nbar", "noise", "ndot", "use_model",
          "shots", "seed", "beta_max", "grid_n", "x_max", "grid_m", "out", "format"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["kp"].get<int>() == 3);
}
