#include "bridgevol/geometry.hpp"

namespace bridgevol::diagram {

SphericalPoint to_spherical(const stochastic::OhlcSample& s) {
    const double r = std::sqrt(s.h * s.h + s.l * s.l + s.c * s.c);
    if (r == 0.0)
        throw std::domain_error("to_spherical: degenerate all-zero sample");
    const double planar = std::hypot(s.h, s.l);
    const double theta = std::atan2(s.c, planar);
    // atan2 keeps phi in [-pi/2, 0] for h >= 0 >= l; the h = l = 0 pole
    // (possible for complete bridges of short walks) maps to any phi.
    const double phi = (planar == 0.0) ? -M_PI_4 : std::atan2(s.l, s.h);
    return SphericalPoint{r, theta, phi};
}

stochastic::OhlcSample to_cartesian(const SphericalPoint& p, double kappa) {
    stochastic::OhlcSample s;
    s.h = p.r * std::cos(p.theta) * std::cos(p.phi);
    s.l = p.r * std::cos(p.theta) * std::sin(p.phi);
    s.c = p.r * std::sin(p.theta);
    s.kappa = kappa;
    return s;
}

SkappaQuadrature make_skappa_quadrature(double kappa, const SkappaQuadratureSpec& spec) {
    const DomainSkappa domain{kappa};
    const quadrature::Rule rule = quadrature::gauss_legendre(spec.gl_order);
    const auto phi_edges = quadrature::graded_edges(-M_PI_2, 0.0, spec.phi_panels);
    const auto s_edges = quadrature::graded_edges(0.0, 1.0, spec.s_panels);

    SkappaQuadrature quad;
    quad.points.reserve(static_cast<std::size_t>(spec.phi_panels) * spec.s_panels *
                        spec.gl_order * spec.gl_order);
    quad.weights.reserve(quad.points.capacity());
    for (int ip = 0; ip + 1 <= spec.phi_panels; ++ip) {
        const double pa = phi_edges[ip], pb = phi_edges[ip + 1];
        for (int a = 0; a < spec.gl_order; ++a) {
            const double phi = 0.5 * (pa + pb) + 0.5 * (pb - pa) * rule.nodes[a];
            const double wphi = 0.5 * (pb - pa) * rule.weights[a];
            const double lo = domain.theta_lo(phi), hi = domain.theta_hi(phi);
            for (int is = 0; is + 1 <= spec.s_panels; ++is) {
                const double sa = s_edges[is], sb = s_edges[is + 1];
                for (int b = 0; b < spec.gl_order; ++b) {
                    const double s = 0.5 * (sa + sb) + 0.5 * (sb - sa) * rule.nodes[b];
                    const double ws = 0.5 * (sb - sa) * rule.weights[b];
                    const double theta = lo + s * (hi - lo);
                    quad.points.emplace_back(theta, phi);
                    quad.weights.push_back(wphi * ws * (hi - lo) * std::cos(theta));
                }
            }
        }
    }
    // Cache key: resolution and a scaled kappa fingerprint.
    const std::uint64_t kbits = static_cast<std::uint64_t>(std::llround(kappa * 1e12));
    quad.id = (kbits * 1000003u) ^ (static_cast<std::uint64_t>(spec.phi_panels) << 40) ^
              (static_cast<std::uint64_t>(spec.s_panels) << 20) ^
              static_cast<std::uint64_t>(spec.gl_order);
    return quad;
}

}  // namespace bridgevol::diagram
