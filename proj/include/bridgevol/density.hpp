#pragma once

#include "bridgevol/series.hpp"

namespace bridgevol::density {

struct DensityParams {
    double kappa = 0.0;
    double gamma = 0.0;
    SeriesPolicy series;

    void validate() const;
};

// Moving absorbing barriers omega = a + alpha*tau (lower) and
// omega = b + beta*tau (upper) bracketing the origin at tau = 0.
struct BarrierSpec {
    double a = -1.0;
    double b = 1.0;
    double alpha = 0.0;
    double beta = 0.0;

    void validate() const;
};

// Density phi(omega; tau) of a standard Wiener path started at 0 that has
// stayed between the two moving barriers up to time tau (image-charge sum).
// Returns 0 outside (a + alpha*tau, b + beta*tau).
double barrier_density(double omega, double tau, const BarrierSpec& spec,
                       const SeriesPolicy& series = {});

// Joint pdf Q(h, l, c; kappa, gamma) of the incomplete-bridge high/low and
// the close of the underlying process. Zero outside the support
// {h > h_-, l < l_+, l <= (1-kappa)c <= h}. Bridges with |1-kappa| < 1e-8
// are routed to the complete-bridge factorization.
double joint_pdf(double h, double l, double c, const DensityParams& params);

// Conditional pdf R(h, l; kappa | c) of the extremes given the close; does
// not depend on gamma.
double conditional_pdf(double h, double l, double c, double kappa,
                       const SeriesPolicy& series = {});

// kappa -> 1 limit: Q = g(c - gamma) * R(h, l), extremes independent of the
// close.
double complete_bridge_pdf(double h, double l, double c, double gamma,
                           const SeriesPolicy& series = {});

// Survival function f(h, l, c; kappa, gamma): density in c of paths whose
// bridge stayed inside [l, h] on the whole interval. Q = -d^2 f / dh dl.
double survival_function(double h, double l, double c, const DensityParams& params);

namespace detail {
// Conditional-density kernel in terms of w = (1-kappa)*c. The image series
// needs ~5/(h-l) shells; below h-l = 0.09 the value is bounded by
// exp(-pi^2/(2(h-l)^2)) < 1e-260 and is returned as exact zero.
double r_kernel(double h, double l, double w, const SeriesPolicy& series);
constexpr double kRangeFloor = 0.09;
constexpr double kBoundaryTol = 1e-12;
constexpr double kCompleteKappaTol = 1e-8;
}  // namespace detail

}  // namespace bridgevol::density
