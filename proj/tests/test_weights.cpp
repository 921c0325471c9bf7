#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bridgevol/geometry.hpp"
#include "bridgevol/rng.hpp"
#include "bridgevol/weights.hpp"

using namespace bridgevol;
using weights::WeightField;
using weights::WeightMode;

namespace {

WeightField make_field(double lambda, double kappa, double gamma, WeightMode mode) {
    WeightField field;
    field.lambda = lambda;
    field.kappa = kappa;
    field.gamma = gamma;
    field.mode = mode;
    return field;
}

// Uniform point of S_kappa in the (phi, s) parametrization.
std::pair<double, double> random_domain_point(const rng::Stream& stream, std::uint64_t i,
                                              double kappa) {
    const diagram::DomainSkappa domain{kappa};
    const double phi = -M_PI_2 * (0.02 + 0.96 * stream.uniform(i, 0));
    const double s = 0.02 + 0.96 * stream.uniform(i, 1);
    return {domain.theta_of_s(s, phi), phi};
}

bool close_enough(double a, double b, double rel, double abs_floor) {
    return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b)) + abs_floor;
}

}  // namespace

TEST_CASE("i_lambda closed form: frozen arithmetic value") {
    // lambda = 2, kappa = 0, h = 1, c = 0: a = b = 4, so
    // I = 2^(7/2) Gamma(5/2) (5*4 - 4) / 4^(7/2).
    const double expected =
        std::pow(2.0, 3.5) * std::tgamma(2.5) * 16.0 / std::pow(4.0, 3.5);
    CHECK(weights::i_lambda_gamma0(1.0, 0.0, 2.0, 0.0) ==
          doctest::Approx(expected).epsilon(1e-14));
    CHECK(weights::i_lambda_gamma0(1.0, 0.0, 2.0, 0.0) ==
          doctest::Approx(1.8799712059732504).epsilon(1e-12));
}

TEST_CASE("i_lambda: Kummer form reduces to the closed form at gamma = 0") {
    rng::Stream stream(3, 0);
    for (int i = 0; i < 400; ++i) {
        const double kappa = 0.98 * stream.uniform(i, 0);
        const double lambda = -0.5 + 4.5 * stream.uniform(i, 1);
        const double h = 0.05 + 2.5 * stream.uniform(i, 2);
        const double u = 1.0 - kappa;
        const double c = (stream.uniform(i, 3) < 0.7)
                             ? h / u * (2.0 * stream.uniform(i, 4) - 1.0) * 0.9
                             : 0.0;
        if (4.0 * h * (h - u * c) + c * c <= 1e-9) continue;
        const double kummer = weights::i_lambda(h, c, lambda, kappa, 0.0);
        const double closed = weights::i_lambda_gamma0(h, c, lambda, kappa);
        CHECK(close_enough(kummer, closed, 1e-10, 1e-300));
    }
}

TEST_CASE("i_lambda: d = 0 through c = 0 with nonzero gamma") {
    // gamma*c = 0 collapses every Kummer argument to M(.,.,0) = 1.
    for (double gamma : {0.5, 2.0, -1.5}) {
        const double with_drift = weights::i_lambda(0.8, 0.0, 1.0, 0.3, gamma);
        const double closed = weights::i_lambda_gamma0(0.8, 0.0, 1.0, 0.3);
        CHECK(with_drift == doctest::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("i_lambda: boundary and exterior points are domain errors") {
    // a = 4h(h - (1-k)c) + c^2 = 0 at the origin of the (h, c) plane.
    CHECK_THROWS_AS(weights::i_lambda(0.0, 0.0, 2.0, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(weights::i_lambda_gamma0(0.0, 0.0, 2.0, 0.0), std::domain_error);
}

TEST_CASE("weight: domain membership is enforced") {
    const auto field = make_field(2.0, 0.0, 0.0, WeightMode::closed_form_gamma0);
    CHECK_THROWS_AS(weights::weight(1.5, -0.5, field), std::domain_error);  // theta too big
    CHECK_THROWS_AS(weights::weight(0.0, 0.5, field), std::domain_error);   // phi > 0
}

TEST_CASE("weight: field validation") {
    auto bad_lambda = make_field(-3.5, 0.0, 0.0, WeightMode::quadrature_oracle);
    CHECK_THROWS_AS(bad_lambda.validate(), std::invalid_argument);
    auto closed_with_drift = make_field(2.0, 0.0, 0.5, WeightMode::closed_form_gamma0);
    CHECK_THROWS_AS(closed_with_drift.validate(), std::invalid_argument);
    auto series_low_order = make_field(-1.5, 0.0, 0.0, WeightMode::kummer_series);
    CHECK_THROWS_AS(series_low_order.validate(), std::invalid_argument);
    auto oracle_low_order = make_field(-1.5, 0.0, 0.0, WeightMode::quadrature_oracle);
    CHECK_NOTHROW(oracle_low_order.validate());
}

TEST_CASE("weight: three-way mode agreement at gamma = 0") {
    rng::Stream stream(41, 0);
    for (double kappa : {0.0, 0.5, 0.95}) {
        for (double lambda : {1.0, 2.0}) {
            const auto closed = make_field(lambda, kappa, 0.0, WeightMode::closed_form_gamma0);
            const auto series = make_field(lambda, kappa, 0.0, WeightMode::kummer_series);
            const auto oracle = make_field(lambda, kappa, 0.0, WeightMode::quadrature_oracle);
            const std::uint64_t salt =
                static_cast<std::uint64_t>(1000 * kappa) + static_cast<std::uint64_t>(lambda);
            for (int i = 0; i < 60; ++i) {
                const auto [theta, phi] =
                    random_domain_point(stream, 10000 * salt + i, kappa);
                const double a = weights::weight(theta, phi, closed);
                const double b = weights::weight(theta, phi, series);
                const double c = weights::weight(theta, phi, oracle);
                CHECK(close_enough(a, b, 1e-8, 1e-10));
                CHECK(close_enough(a, c, 1e-6, 1e-10));
                CHECK(close_enough(b, c, 1e-6, 1e-10));
            }
        }
    }
}

TEST_CASE("weight: Kummer series vs quadrature oracle with drift") {
    rng::Stream stream(43, 0);
    for (double gamma : {0.5, 2.0}) {
        for (double kappa : {0.0, 0.5}) {
            const auto series = make_field(2.0, kappa, gamma, WeightMode::kummer_series);
            const auto oracle = make_field(2.0, kappa, gamma, WeightMode::quadrature_oracle);
            const std::uint64_t salt = static_cast<std::uint64_t>(10 * gamma + 100 * kappa);
            for (int i = 0; i < 25; ++i) {
                const auto [theta, phi] = random_domain_point(stream, 999 * salt + i, kappa);
                const double a = weights::weight(theta, phi, series);
                const double b = weights::weight(theta, phi, oracle);
                CHECK(close_enough(a, b, 1e-6, 1e-10));
            }
        }
    }
}

TEST_CASE("weight is nonnegative across the domain") {
    rng::Stream stream(47, 0);
    for (double kappa : {0.0, 0.6, 1.0}) {
        const auto field = make_field(2.0, kappa, 0.0, WeightMode::closed_form_gamma0);
        for (int i = 0; i < 2000; ++i) {
            const auto [theta, phi] =
                random_domain_point(stream, static_cast<std::uint64_t>(kappa * 100) * 5000 + i,
                                    kappa);
            CHECK(weights::weight(theta, phi, field) >= 0.0);
        }
    }
}

TEST_CASE("lambda = 0 weight integrates to total probability 1") {
    // Radial quadrature of Q collapses g_0 to the probability density of the
    // direction; its domain integral is 1.
    const auto field = make_field(0.0, 0.5, 0.0, WeightMode::quadrature_oracle);
    diagram::SkappaQuadratureSpec spec;
    spec.phi_panels = 12;
    spec.s_panels = 8;
    spec.gl_order = 6;
    const double total = diagram::integrate_skappa(
        0.5, [&](double theta, double phi) { return weights::weight(theta, phi, field); },
        spec);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("weight decays to zero toward the degenerate domain edge") {
    // kappa = 1: the slice reaches the poles where the bridge range on the
    // unit sphere vanishes.
    const auto field = make_field(2.0, 1.0, 0.0, WeightMode::closed_form_gamma0);
    // The field peaks mid-domain (around pi/2 - theta = 0.4 on this ray) and
    // then falls to zero at the pole.
    double last = 1e300;
    for (double eps : {0.3, 0.2, 0.12, 0.09, 0.06, 0.03}) {
        const double value = weights::weight(M_PI_2 - eps, -M_PI_4, field);
        CHECK(value < last);
        last = value;
    }
    CHECK(weights::weight(M_PI_2 - 0.03, -M_PI_4, field) == 0.0);
}

TEST_CASE("weight series is stable against doubling the shell budget") {
    rng::Stream stream(53, 0);
    auto base = make_field(1.0, 0.9, 0.0, WeightMode::closed_form_gamma0);
    auto doubled = base;
    doubled.series.max_terms = 400;
    for (int i = 0; i < 50; ++i) {
        const auto [theta, phi] = random_domain_point(stream, i, 0.9);
        const double a = weights::weight(theta, phi, base);
        const double b = weights::weight(theta, phi, doubled);
        CHECK(close_enough(a, b, 1e-9, base.series.abs_tol));
    }
}

TEST_CASE("weight_on_grid_cached memoizes by key") {
    weights::clear_weight_cache();
    const auto field = make_field(2.0, 0.3, 0.0, WeightMode::closed_form_gamma0);
    const std::vector<std::pair<double, double>> pts = {{0.1, -0.4}, {0.2, -0.9}};
    const auto a = weights::weight_on_grid_cached(field, 777, pts);
    const auto b = weights::weight_on_grid_cached(field, 777, pts);
    CHECK(a.get() == b.get());
    CHECK((*a)[0] == weights::weight(0.1, -0.4, field));
    auto other = field;
    other.lambda = 4.0;
    const auto c = weights::weight_on_grid_cached(other, 777, pts);
    CHECK(c.get() != a.get());
    weights::clear_weight_cache();
}
