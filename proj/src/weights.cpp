#include "bridgevol/weights.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>

#include "bridgevol/density.hpp"
#include "bridgevol/geometry.hpp"
#include "bridgevol/quadrature.hpp"
#include "bridgevol/specialfn.hpp"

namespace bridgevol::weights {

using specialfn::kummer_m;

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
// Below this bridge range on the unit sphere the field is bounded by
// exp(-pi/range) ~ 1e-28 and treated as zero.
constexpr double kDegenerateRange = 0.05;

double checked_a(double h, double c, double kappa) {
    const double u = 1.0 - kappa;
    const double a = 4.0 * h * (h - u * c) + c * c;
    if (a <= 0.0)
        throw std::domain_error("i_lambda: a <= 0 (point on or outside the support boundary)");
    return a;
}

// Image-sum over m with Euler-Maclaurin tail acceleration. The summand only
// decays algebraically (like m^-(2+lambda)), so plain truncation at the
// policy budget would miss the tolerance; both tails are closed with a
// midpoint-mapped Gauss integral plus endpoint corrections.
class ImageSum {
public:
    ImageSum(std::function<double(double)> term, const SeriesPolicy& policy)
        : term_(std::move(term)), policy_(policy) {}

    double run(int explicit_shells) const {
        const int m_max = std::min(explicit_shells, policy_.max_terms);
        long double sum = 0.0L;
        long double max_term = 0.0L;
        for (int m = 1; m <= m_max; ++m) {
            const long double tp = term_(m);
            const long double tm = term_(-m);
            sum += tp + tm;
            max_term = std::max({max_term, std::fabs(tp), std::fabs(tm)});
        }
        sum += tail(+1.0, m_max);
        sum += tail(-1.0, m_max);
        double value = static_cast<double>(sum);
        // Cancellation floor: near the degenerate edge the shells stay O(1)
        // while the total underflows; below the floor the residual (including
        // its sign) is summation noise.
        if (std::fabs(value) < 1e-12 * static_cast<double>(max_term)) return 0.0;
        return value;
    }

private:
    double tail(double sign, int m_max) const {
        const double a = m_max + 1.0;
        auto s = [&](double x) { return term_(sign * x); };
        auto mapped = [&](double u) { return s(a / u) * a / (u * u); };
        const double integral = quadrature::integrate_rule(mapped, 0.0, 1.0, tail_rule());
        const double h = 0.25;
        const double ds = (s(a + h) - s(a - h)) / (2.0 * h);
        return integral + 0.5 * s(a) - ds / 12.0;
    }

    static const quadrature::Rule& tail_rule() {
        static const quadrature::Rule rule = quadrature::gauss_legendre(64);
        return rule;
    }

    std::function<double(double)> term_;
    SeriesPolicy policy_;
};

double image_series_weight(double theta, double phi, const WeightField& field) {
    const double ct = std::cos(theta);
    const double ht = ct * std::cos(phi);
    const double lt = ct * std::sin(phi);
    const double c = std::sin(theta);
    const double range = ht - lt;
    if (range < kDegenerateRange) return 0.0;

    std::function<double(double, double)> eval;
    if (field.mode == WeightMode::closed_form_gamma0) {
        eval = [&](double x, double cc) { return i_lambda_gamma0(x, cc, field.lambda, field.kappa); };
    } else {
        eval = [&](double x, double cc) {
            return i_lambda(x, cc, field.lambda, field.kappa, field.gamma);
        };
    }
    auto term = [&](double m) {
        return m * (m * eval(m * range, c) + (1.0 - m) * eval(m * range + lt, c));
    };
    // Terms decay like m^-(2+lambda); the tail closure needs the explicit
    // part to reach well into the asymptotic regime.
    const int shells = std::max(48, static_cast<int>(std::ceil(24.0 / range)));
    const double sum = ImageSum(term, field.series).run(shells);
    return kInvSqrt2Pi * std::exp(-0.5 * field.gamma * field.gamma) * sum;
}

double quadrature_weight(double theta, double phi, const WeightField& field) {
    const double ct = std::cos(theta);
    const double ht = ct * std::cos(phi);
    const double lt = ct * std::sin(phi);
    const double c = std::sin(theta);
    density::DensityParams params;
    params.kappa = field.kappa;
    params.gamma = field.gamma;
    params.series = field.series;
    auto integrand = [&](double rho) {
        const double q = density::joint_pdf(rho * ht, rho * lt, rho * c, params);
        return q == 0.0 ? 0.0 : std::pow(rho, field.lambda + 2.0) * q;
    };
    return quadrature::integrate_half_line(integrand, 1e-8);
}

}  // namespace

void WeightField::validate() const {
    series.validate();
    if (!(lambda + 3.0 > 0.0))
        throw std::invalid_argument("WeightField: need lambda > -3");
    if (!(kappa >= 0.0 && kappa <= 1.0))
        throw std::invalid_argument("WeightField: kappa must lie in [0,1]");
    if (!std::isfinite(gamma))
        throw std::invalid_argument("WeightField: gamma must be finite");
    if (mode == WeightMode::closed_form_gamma0 && gamma != 0.0)
        throw std::invalid_argument("WeightField: closed form is the gamma = 0 branch");
    if (mode != WeightMode::quadrature_oracle && !(lambda > -1.0))
        throw std::invalid_argument(
            "WeightField: image-series modes need lambda > -1; use the quadrature oracle");
}

double i_lambda(double h, double c, double lambda, double kappa, double gamma) {
    const double a = checked_a(h, c, kappa);
    const double u = 1.0 - kappa;
    const double b = (2.0 * h - u * c) * (2.0 * h - u * c);
    const double d = gamma * c;
    const double z = d * d / (2.0 * a);
    const double g52 = std::tgamma(0.5 * (5.0 + lambda));
    const double g32 = std::tgamma(0.5 * (3.0 + lambda));
    const double g3 = std::tgamma(3.0 + 0.5 * lambda);
    const double g2 = std::tgamma(2.0 + 0.5 * lambda);
    const double bracket =
        b * std::sqrt(2.0 * a) * g52 * kummer_m(0.5 * (5.0 + lambda), 0.5, z) -
        a * std::sqrt(0.5 * a) * g32 * kummer_m(0.5 * (3.0 + lambda), 0.5, z) +
        2.0 * d * b * g3 * kummer_m(3.0 + 0.5 * lambda, 1.5, z) -
        d * a * g2 * kummer_m(2.0 + 0.5 * lambda, 1.5, z);
    return std::pow(2.0 / a, 3.0 + 0.5 * lambda) * bracket;
}

double i_lambda_gamma0(double h, double c, double lambda, double kappa) {
    const double u = 1.0 - kappa;
    const double a = (2.0 * h - c) * (2.0 * h - c) + 4.0 * h * kappa * c;
    if (a <= 0.0)
        throw std::domain_error("i_lambda_gamma0: point on or outside the support boundary");
    const double top = (3.0 + lambda) * (2.0 * h - u * c) * (2.0 * h - u * c) -
                       (2.0 * h - c) * (2.0 * h - c) - 4.0 * kappa * c * h;
    return std::pow(2.0, 0.5 * (5.0 + lambda)) * std::tgamma(0.5 * (3.0 + lambda)) * top /
           std::pow(a, 0.5 * (5.0 + lambda));
}

double weight(double theta, double phi, const WeightField& field) {
    field.validate();
    const diagram::DomainSkappa domain{field.kappa};
    if (!domain.contains(theta, phi, 1e-12))
        throw std::domain_error("weight: (theta, phi) outside S_kappa");
    switch (field.mode) {
        case WeightMode::quadrature_oracle: return quadrature_weight(theta, phi, field);
        case WeightMode::closed_form_gamma0:
        case WeightMode::kummer_series: return image_series_weight(theta, phi, field);
    }
    return 0.0;
}

namespace {

struct CacheKey {
    double lambda, kappa, gamma;
    int mode;
    std::uint64_t grid_id;

    bool operator<(const CacheKey& o) const {
        if (lambda != o.lambda) return lambda < o.lambda;
        if (kappa != o.kappa) return kappa < o.kappa;
        if (gamma != o.gamma) return gamma < o.gamma;
        if (mode != o.mode) return mode < o.mode;
        return grid_id < o.grid_id;
    }
};

std::mutex cache_mutex;
std::map<CacheKey, std::shared_ptr<const std::vector<double>>> cache;

}  // namespace

std::shared_ptr<const std::vector<double>> weight_on_grid_cached(
    const WeightField& field, std::uint64_t grid_id,
    const std::vector<std::pair<double, double>>& theta_phi) {
    const CacheKey key{field.lambda, field.kappa, field.gamma,
                       static_cast<int>(field.mode), grid_id};
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto values = std::make_shared<std::vector<double>>();
    values->reserve(theta_phi.size());
    for (const auto& [theta, phi] : theta_phi)
        values->push_back(weight(theta, phi, field));
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto [it, inserted] = cache.emplace(key, std::move(values));
    return it->second;
}

void clear_weight_cache() {
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.clear();
}

}  // namespace bridgevol::weights
