#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "bridgevol/series.hpp"

namespace bridgevol::weights {

enum class WeightMode { closed_form_gamma0, kummer_series, quadrature_oracle };

// The weight field g_lambda(theta, phi; kappa, gamma): radial moment of
// order lambda+2 of the joint OHLC density along the (theta, phi) ray. It is
// the measure against which diagrams are averaged.
struct WeightField {
    double lambda = 2.0;
    double kappa = 0.0;
    double gamma = 0.0;
    SeriesPolicy series;
    WeightMode mode = WeightMode::closed_form_gamma0;

    // lambda + 3 > 0 keeps the radial moment finite. The image-series modes
    // additionally need lambda > -1 (terms decay like m^-(2+lambda)); the
    // quadrature oracle covers the remaining range.
    void validate() const;
};

// g_lambda at one point of S_kappa. Throws std::domain_error outside the
// domain. Near the degenerate edge cos(theta) -> 0 the field underflows
// (bounded by exp(-pi/(h-l)) along the ray) and is returned as exact zero.
double weight(double theta, double phi, const WeightField& field);

// Radial integral I_lambda(h, c; kappa, gamma): four Kummer-function terms
// with Gamma prefactors, in the notation a = 4h(h-(1-kappa)c) + c^2,
// b = (2h-(1-kappa)c)^2, d = gamma*c. Requires a > 0 (strict interior of the
// support); a <= 0 raises std::domain_error.
double i_lambda(double h, double c, double lambda, double kappa, double gamma);

// gamma = 0 specialization in closed form (no Kummer evaluations).
double i_lambda_gamma0(double h, double c, double lambda, double kappa);

// Memoized grid evaluation, keyed by (lambda, kappa, gamma, mode, grid_id).
// Diagram construction evaluates g_lambda and g_2lambda on identical node
// sets; the cache is safe for concurrent readers with single-writer insert.
std::shared_ptr<const std::vector<double>> weight_on_grid_cached(
    const WeightField& field, std::uint64_t grid_id,
    const std::vector<std::pair<double, double>>& theta_phi);

void clear_weight_cache();

}  // namespace bridgevol::weights
