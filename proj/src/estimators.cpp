#include "bridgevol/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "bridgevol/geometry.hpp"

namespace bridgevol::estimators {

namespace {
constexpr double kGk1 = 0.511;
constexpr double kGk2 = 0.019;
constexpr double kGk3 = 0.383;
constexpr double kFourLn2 = 2.772588722239781;
}  // namespace

void EstimateRequest::validate() const {
    if (diagram == nullptr)
        throw std::invalid_argument("EstimateRequest: diagram is required");
    if (samples.size() < 2)
        throw std::invalid_argument("EstimateRequest: need at least 2 samples");
    if (horizons.size() != 1 && horizons.size() != samples.size())
        throw std::invalid_argument("EstimateRequest: horizons must broadcast or match samples");
    for (double T : horizons)
        if (!(T > 0.0)) throw std::invalid_argument("EstimateRequest: horizons must be positive");
    for (const auto& s : samples)
        if (s.kappa != diagram->kappa)
            throw std::invalid_argument("EstimateRequest: sample kappa differs from diagram kappa");
}

double estimate_one(const stochastic::OhlcSample& s, double T,
                    const diagram::Diagram& diag, OutputScale scale) {
    if (!(T > 0.0)) throw std::invalid_argument("estimate_one: T must be positive");
    const double r2 = s.h * s.h + s.l * s.l + s.c * s.c;
    if (r2 == 0.0) throw std::domain_error("estimate_one: degenerate all-zero sample");
    const double r = std::sqrt(r2);
    // Rounding noise in user data gets a tolerance band proportional to R.
    const double tol = 1e-9 * r;
    if (s.h < -tol) throw std::domain_error("estimate_one: sample violates H >= 0");
    if (s.l > tol) throw std::domain_error("estimate_one: sample violates L <= 0");
    const double w = (1.0 - diag.kappa) * s.c;
    if (w < s.l - tol || w > s.h + tol)
        throw std::domain_error("estimate_one: sample violates L <= (1-kappa)C <= H");
    const auto p = diagram::to_spherical(s);
    double value = std::pow(r, diag.lambda) * diag.value(p.theta, p.phi);
    if (scale == OutputScale::price_scale) value /= std::pow(T, 0.5 * diag.lambda);
    return value;
}

double classic_gk(const stochastic::OhlcSample& s) {
    const double u = 1.0 - s.kappa;
    const double range = s.h - s.l;
    return kGk1 * range * range -
           kGk2 * (u * s.c * (s.h + s.l) - 2.0 * s.h * s.l) -
           kGk3 * u * u * s.c * s.c;
}

double classic_parkinson(const stochastic::OhlcSample& s) {
    const double range = s.h - s.l;
    return range * range / kFourLn2;
}

BatchReport batch_report(const EstimateRequest& request) {
    request.validate();
    BatchReport report;
    report.estimates.reserve(request.samples.size());
    for (std::size_t i = 0; i < request.samples.size(); ++i) {
        try {
            report.estimates.push_back(estimate_one(request.samples[i], request.horizon(i),
                                                    *request.diagram, request.scale));
        } catch (const std::domain_error&) {
            ++report.rejected;
        }
    }
    if (report.estimates.empty())
        throw std::runtime_error("batch_report: all samples were rejected");
    if (report.rejected * 1000 > request.samples.size())
        throw std::runtime_error("batch_report: more than 0.1% of samples rejected");

    long double mean = 0.0L;
    for (double e : report.estimates) mean += e;
    mean /= report.estimates.size();
    long double ss = 0.0L;
    for (double e : report.estimates) {
        const long double d = e - mean;
        ss += d * d;
    }
    const std::uint64_t n = report.estimates.size();
    report.stats.mean = static_cast<double>(mean);
    report.stats.variance = n > 1 ? static_cast<double>(ss / (n - 1)) : 0.0;
    report.stats.n = n;
    report.stats.standard_error = std::sqrt(report.stats.variance / static_cast<double>(n));
    report.stats.design = {request.diagram->lambda, request.diagram->kappa,
                           request.diagram->gamma0};
    return report;
}

}  // namespace bridgevol::estimators
