#pragma once

#include <vector>

#include "bridgevol/diagram.hpp"
#include "bridgevol/report.hpp"
#include "bridgevol/stochastic.hpp"

namespace bridgevol::estimators {

enum class OutputScale { canonical, price_scale };

struct EstimateRequest {
    std::vector<stochastic::OhlcSample> samples;  // raw scale
    std::vector<double> horizons;                 // interval length per sample;
                                                  // a single entry broadcasts
    const diagram::Diagram* diagram = nullptr;
    OutputScale scale = OutputScale::canonical;

    void validate() const;
    double horizon(std::size_t i) const {
        return horizons.size() == 1 ? horizons[0] : horizons[i];
    }
};

// Canonical estimate e_lambda = R^lambda psi(Theta, Phi); in price scale the
// homogeneity of the sample values absorbs sigma and the result is divided by
// T^(lambda/2). Degenerate (R = 0) samples and samples outside the diagram's
// support raise std::domain_error naming the violated constraint.
double estimate_one(const stochastic::OhlcSample& s, double T,
                    const diagram::Diagram& diagram,
                    OutputScale scale = OutputScale::canonical);

// Classical canonical quadratic estimators evaluated directly on a sample;
// the Garman-Klass form uses the sample's own kappa in the bridge variant.
double classic_gk(const stochastic::OhlcSample& s);
double classic_parkinson(const stochastic::OhlcSample& s);

struct BatchReport {
    EfficiencyReport stats;
    std::uint64_t rejected = 0;
    std::vector<double> estimates;
};

// Per-sample estimates plus mean/variance/standard-error. Samples rejected
// by estimate_one are skipped and counted; more than 0.1% rejections (or an
// empty remainder) is an error.
BatchReport batch_report(const EstimateRequest& request);

}  // namespace bridgevol::estimators
