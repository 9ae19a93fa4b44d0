#pragma once

#include "hybridosc/errors.hpp"

namespace hybridosc {

/// Poisson fluorescence readout. Counts at or below the threshold classify as
/// dark; this boundary reproduces the reference 4.9e-5 / 7e-6 error pair.
struct DetectionModel {
    double dark_mean = 11.24;       // expected counts, dark state
    double bright_mean = 54.82;     // expected counts, bright state
    int threshold = 28;             // dark iff counts <= threshold
    double dark_lifetime = 0.4;     // s
    double readout_duration = 200e-6;  // s

    void validate() const;
};

struct DetectionErrorProbs {
    double p_dark_given_bright;  // Poisson left tail of the bright distribution
    double p_bright_given_dark;  // Poisson right tail of the dark distribution
    double p_lifetime_flip;      // readout_duration / dark_lifetime
};

/// P(X <= k) for X ~ Poisson(mean).
double poisson_cdf(int k, double mean);

DetectionErrorProbs detection_error_probs(const DetectionModel& model);

/// Combined dark state preparation and measurement probability:
/// (1 - prep_error) * (1 - p_bright_given_dark - p_lifetime_flip).
double spam_dark_probability(const DetectionModel& model, double prep_error);

}  // namespace hybridosc
