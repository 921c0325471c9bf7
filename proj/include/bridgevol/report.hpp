#pragma once

#include <cstdint>

namespace bridgevol {

// Expectation/variance summary of a canonical estimator, either analytic
// (n = 0, no standard error) or from a Monte Carlo batch.
struct EfficiencyReport {
    double mean = 0.0;
    double variance = 0.0;
    std::uint64_t n = 0;
    double standard_error = 0.0;

    struct Design {
        double lambda = 0.0;
        double kappa = 0.0;
        double gamma0 = 0.0;
    } design;
};

}  // namespace bridgevol
