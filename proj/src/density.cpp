#include "bridgevol/density.hpp"

#include <cmath>
#include <stdexcept>

#include "bridgevol/specialfn.hpp"

namespace bridgevol::density {

using specialfn::gaussian_pdf;

void DensityParams::validate() const {
    series.validate();
    if (!std::isfinite(kappa) || !std::isfinite(gamma))
        throw std::invalid_argument("DensityParams: kappa and gamma must be finite");
    if (kappa > 1.0 + detail::kCompleteKappaTol)
        throw std::invalid_argument("DensityParams: kappa must be <= 1");
}

void BarrierSpec::validate() const {
    if (!(a < 0.0 && 0.0 < b))
        throw std::invalid_argument("BarrierSpec: need a < 0 < b");
    if (!std::isfinite(alpha) || !std::isfinite(beta))
        throw std::invalid_argument("BarrierSpec: slopes must be finite");
}

double barrier_density(double omega, double tau, const BarrierSpec& spec,
                       const SeriesPolicy& series) {
    spec.validate();
    if (!(tau > 0.0 && tau <= 1.0))
        throw std::invalid_argument("barrier_density: tau must lie in (0,1]");
    if (omega <= spec.a + spec.alpha * tau || omega >= spec.b + spec.beta * tau) return 0.0;

    const double width = spec.b - spec.a;
    const double log_norm = -0.5 * std::log(2.0 * M_PI * tau);
    auto term = [&](int m) {
        const double md = static_cast<double>(m);
        const double prefactor =
            2.0 * (spec.alpha - spec.beta) * width * md * md +
            2.0 * (spec.alpha * spec.b - spec.beta * spec.a) * md;
        const double x1 = omega + 2.0 * md * width;
        const double x2 = x1 - 2.0 * spec.a;
        const double image =
            2.0 * spec.a * (2.0 * (spec.beta - spec.alpha) * md - spec.alpha);
        const double e1 = prefactor - x1 * x1 / (2.0 * tau) + log_norm;
        const double e2 = prefactor + image - x2 * x2 / (2.0 * tau) + log_norm;
        return std::exp(e1) - std::exp(e2);
    };
    return sum_bilateral(term, series);
}

namespace detail {

// D(x, v) = 4 [(v - 2x)^2 - 1] exp(2x(v - x))
inline double image_kernel(double x, double v) {
    const double s = v - 2.0 * x;
    return 4.0 * (s * s - 1.0) * std::exp(2.0 * x * (v - x));
}

double r_kernel(double h, double l, double w, const SeriesPolicy& series) {
    const double range = h - l;
    if (range < kRangeFloor) return 0.0;
    auto term = [&](int m) {
        if (m == 0) return 0.0;
        const double md = static_cast<double>(m);
        return md * (md * image_kernel(md * range, w) +
                     (1.0 - md) * image_kernel(md * range + l, w));
    };
    return sum_bilateral(term, series);
}

}  // namespace detail

double conditional_pdf(double h, double l, double c, double kappa,
                       const SeriesPolicy& series) {
    series.validate();
    const double u = 1.0 - kappa;
    const double w = u * c;
    const double h_minus = std::max(0.0, w);
    const double l_plus = std::min(0.0, w);
    if (h - h_minus <= detail::kBoundaryTol || l_plus - l <= detail::kBoundaryTol) return 0.0;
    return detail::r_kernel(h, l, w, series);
}

double complete_bridge_pdf(double h, double l, double c, double gamma,
                           const SeriesPolicy& series) {
    series.validate();
    if (h <= detail::kBoundaryTol || l >= -detail::kBoundaryTol) return 0.0;
    return gaussian_pdf(c - gamma) * detail::r_kernel(h, l, 0.0, series);
}

double joint_pdf(double h, double l, double c, const DensityParams& params) {
    params.validate();
    if (std::fabs(1.0 - params.kappa) < detail::kCompleteKappaTol)
        return complete_bridge_pdf(h, l, c, params.gamma, params.series);
    return gaussian_pdf(c - params.gamma) *
           conditional_pdf(h, l, c, params.kappa, params.series);
}

double survival_function(double h, double l, double c, const DensityParams& params) {
    params.validate();
    const double u = 1.0 - params.kappa;
    const double w = u * c;
    const double h_minus = std::max(0.0, w);
    const double l_plus = std::min(0.0, w);
    if (h - h_minus <= detail::kBoundaryTol || l_plus - l <= detail::kBoundaryTol) return 0.0;
    const double range = h - l;
    if (range < detail::kRangeFloor) return 0.0;

    auto term = [&](int m) {
        const double md = static_cast<double>(m);
        const double base = -2.0 * range * range * md * md - 2.0 * md * range * w;
        const double image = 4.0 * range * l * md - 2.0 * l * (l - w);
        return std::exp(base) - std::exp(base + image);
    };
    return gaussian_pdf(c - params.gamma) * sum_bilateral(term, params.series);
}

}  // namespace bridgevol::density
