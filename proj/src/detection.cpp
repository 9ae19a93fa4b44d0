#include "hybridosc/detection.hpp"

#include <cmath>

namespace hybridosc {

void DetectionModel::validate() const {
    if (!(dark_mean > 0.0 && bright_mean > 0.0 && dark_lifetime > 0.0 && readout_duration > 0.0)) {
        throw DomainError("DetectionModel: all parameters must be positive");
    }
    if (!(dark_mean < threshold && threshold < bright_mean)) {
        throw DomainError("DetectionModel: requires dark_mean < threshold < bright_mean");
    }
}

double poisson_cdf(int k, double mean) {
    if (k < 0) return 0.0;
    // sum pmf in log space to stay stable for large means
    double sum = 0.0;
    double log_pmf = -mean;  // n = 0
    for (int n = 0; n <= k; ++n) {
        if (n > 0) log_pmf += std::log(mean) - std::log(static_cast<double>(n));
        sum += std::exp(log_pmf);
    }
    return std::min(sum, 1.0);
}

DetectionErrorProbs detection_error_probs(const DetectionModel& model) {
    DetectionErrorProbs p{};
    p.p_dark_given_bright = poisson_cdf(model.threshold, model.bright_mean);
    p.p_bright_given_dark = 1.0 - poisson_cdf(model.threshold, model.dark_mean);
    p.p_lifetime_flip = model.readout_duration / model.dark_lifetime;
    return p;
}

double spam_dark_probability(const DetectionModel& model, double prep_error) {
    if (prep_error < 0.0 || prep_error > 1.0) {
        throw DomainError("spam_dark_probability: prep_error must be in [0,1]");
    }
    DetectionErrorProbs p = detection_error_probs(model);
    return (1.0 - prep_error) * (1.0 - p.p_bright_given_dark - p.p_lifetime_flip);
}

}  // namespace hybridosc
