#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hybridosc/detection.hpp"

using namespace hybridosc;

TEST_CASE("poisson_cdf basics") {
    CHECK(poisson_cdf(-1, 5.0) == 0.0);
    CHECK(poisson_cdf(0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(poisson_cdf(1000, 5.0) == doctest::Approx(1.0).epsilon(1e-12));
    // stable at large means
    CHECK(poisson_cdf(500, 500.0) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("detection_error_probs reproduces the reference error pair") {
    DetectionModel model;  // defaults: 11.24 / 54.82 / threshold 28
    model.validate();
    DetectionErrorProbs p = detection_error_probs(model);
    CHECK(std::abs(p.p_dark_given_bright - 4.9e-5) / 4.9e-5 < 0.2);
    CHECK(std::abs(p.p_bright_given_dark - 7e-6) / 7e-6 < 0.2);
    CHECK(p.p_lifetime_flip == doctest::Approx(5e-4).epsilon(1e-12));
}

TEST_CASE("threshold=0 degenerates to the near-trivial classifier") {
    DetectionModel model;
    model.threshold = 0;  // only zero counts classify dark
    DetectionErrorProbs p = detection_error_probs(model);
    CHECK(p.p_dark_given_bright < 1e-20);  // e^{-bright_mean}
    CHECK(p.p_bright_given_dark == doctest::Approx(1.0).epsilon(2e-5));
}

TEST_CASE("false-dark probability is monotone increasing in the threshold") {
    DetectionModel model;
    double prev = -1.0;
    for (int th = 1; th <= 54; ++th) {
        model.threshold = th;
        double cur = detection_error_probs(model).p_dark_given_bright;
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("spam_dark_probability") {
    DetectionModel ideal;
    ideal.dark_mean = 1e-9;
    ideal.bright_mean = 1e9;
    ideal.threshold = 100;
    ideal.dark_lifetime = 1e12;
    CHECK(spam_dark_probability(ideal, 0.0) == doctest::Approx(1.0).epsilon(1e-9));

    // inverting 0.993 = (1-e)(1 - p_bd - p_flip) with the reference model
    DetectionModel model;
    DetectionErrorProbs p = detection_error_probs(model);
    double prep_error = 1.0 - 0.993 / (1.0 - p.p_bright_given_dark - p.p_lifetime_flip);
    CHECK(prep_error == doctest::Approx(6.5e-3).epsilon(0.01));
    CHECK(spam_dark_probability(model, prep_error) == doctest::Approx(0.993).epsilon(1e-9));

    CHECK_THROWS_AS(spam_dark_probability(model, -0.1), DomainError);
}

TEST_CASE("model validation") {
    DetectionModel bad;
    bad.threshold = 5;  // below dark_mean
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = DetectionModel{};
    bad.dark_lifetime = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}
