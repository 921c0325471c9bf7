#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bridgevol/quadrature.hpp"
#include "bridgevol/stochastic.hpp"

namespace bridgevol::diagram {

// Geographic coordinates of an OHLC triple:
//   H = R cos(theta) cos(phi), L = R cos(theta) sin(phi), C = R sin(theta).
struct SphericalPoint {
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;  // in [-pi/2, 0]
};

SphericalPoint to_spherical(const stochastic::OhlcSample& s);
stochastic::OhlcSample to_cartesian(const SphericalPoint& p, double kappa);

// Admissible (theta, phi) region induced by H >= 0 >= L and
// L <= (1-kappa) C <= H. For kappa = 1 the theta slice widens to the full
// (-pi/2, pi/2).
struct DomainSkappa {
    double kappa = 0.0;

    double theta_lo(double phi) const { return std::atan2(std::sin(phi), 1.0 - kappa); }
    double theta_hi(double phi) const { return std::atan2(std::cos(phi), 1.0 - kappa); }

    bool contains(double theta, double phi, double tol = 0.0) const {
        if (phi < -M_PI_2 - tol || phi > tol) return false;
        return theta >= theta_lo(phi) - tol && theta <= theta_hi(phi) + tol;
    }

    // Normalized slice coordinate s in [0,1] with every phi-row spanning the
    // exact domain slice; the gridded diagrams and histograms live in (phi,s).
    double s_of_theta(double theta, double phi) const {
        const double lo = theta_lo(phi), hi = theta_hi(phi);
        return (theta - lo) / (hi - lo);
    }
    double theta_of_s(double s, double phi) const {
        const double lo = theta_lo(phi), hi = theta_hi(phi);
        return lo + s * (hi - lo);
    }
};

struct GridSpec {
    int n_phi = 200;
    int n_s = 200;

    void validate() const {
        if (n_phi < 2 || n_s < 2)
            throw std::invalid_argument("GridSpec: need at least 2 cells per axis");
    }
    double phi_center(int i) const { return -M_PI_2 + (i + 0.5) * M_PI_2 / n_phi; }
    double s_center(int j) const { return (j + 0.5) / n_s; }
    double phi_width() const { return M_PI_2 / n_phi; }
    double s_width() const { return 1.0 / n_s; }
};

struct SkappaQuadratureSpec {
    int phi_panels = 24;
    int s_panels = 16;
    int gl_order = 8;
};

// Materialized tensor rule over S_kappa in (phi, s) coordinates, with panels
// graded toward the phi and s edges, where the integrands vary fastest. The
// stored weights already carry the cos(theta) measure and the slice Jacobian,
// so integrals reduce to dot products against pointwise samples; `id` keys
// the weight-field memoization cache.
struct SkappaQuadrature {
    std::vector<std::pair<double, double>> points;  // (theta, phi)
    std::vector<double> weights;
    std::uint64_t id = 0;

    template <typename F>
    double integrate(const F& f) const {
        long double sum = 0.0L;
        for (std::size_t i = 0; i < points.size(); ++i)
            sum += static_cast<long double>(weights[i]) * f(points[i].first, points[i].second);
        return static_cast<double>(sum);
    }
};

SkappaQuadrature make_skappa_quadrature(double kappa, const SkappaQuadratureSpec& spec = {});

// Integral over S_kappa of f(theta, phi) cos(theta) dtheta dphi.
template <typename F>
double integrate_skappa(double kappa, const F& f, const SkappaQuadratureSpec& spec = {}) {
    return make_skappa_quadrature(kappa, spec).integrate(f);
}

}  // namespace bridgevol::diagram
