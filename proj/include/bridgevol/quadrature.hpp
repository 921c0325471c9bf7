#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bridgevol::quadrature {

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre rule of order n, nodes by Newton iteration on P_n.
inline Rule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

template <typename F>
double integrate_rule(const F& f, double a, double b, const Rule& rule) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    long double sum = 0.0L;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += static_cast<long double>(rule.weights[i]) * f(mid + half * rule.nodes[i]);
    return static_cast<double>(sum) * half;
}

// Composite Gauss-Legendre over given panel edges.
template <typename F>
double integrate_panels(const F& f, const std::vector<double>& edges, const Rule& rule) {
    long double sum = 0.0L;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        sum += integrate_rule(f, edges[i], edges[i + 1], rule);
    return static_cast<double>(sum);
}

// Panel edges on [a,b] graded toward both endpoints (cosine spacing).
inline std::vector<double> graded_edges(double a, double b, int panels) {
    std::vector<double> edges(panels + 1);
    for (int i = 0; i <= panels; ++i) {
        double u = 0.5 * (1.0 - std::cos(M_PI * i / panels));
        edges[i] = a + (b - a) * u;
    }
    return edges;
}

namespace detail {
// G7-K15 node/weight pairs: abscissa, Gauss weight (0 for Kronrod-only
// points), Kronrod weight.
constexpr double kGK15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529}};

template <typename F>
double gk15(const F& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = kGK15[0][1] * f0;
    double k15 = kGK15[0][2] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kGK15[i][0];
        const double fi = f(mid + dx) + f(mid - dx);
        g7 += kGK15[i][1] * fi;
        k15 += kGK15[i][2] * fi;
    }
    g7 *= half;
    k15 *= half;
    err = std::fabs(g7 - k15);
    return k15;
}
}  // namespace detail

// Adaptive Gauss-Kronrod integration with interval bisection.
template <typename F>
double integrate_adaptive(const F& f, double a, double b,
                          double rel_tol = 1e-8, double abs_tol = 1e-14,
                          int max_intervals = 4000) {
    struct Seg { double a, b; };
    std::vector<Seg> stack{{a, b}};
    stack.reserve(64);
    long double sum = 0.0L;
    int used = 0;
    while (!stack.empty()) {
        const Seg s = stack.back();
        stack.pop_back();
        double err = 0.0;
        const double v = detail::gk15(f, s.a, s.b, err);
        if (err < std::max(abs_tol, rel_tol * std::fabs(v)) ||
            (s.b - s.a) < 1e-14 * std::fabs(b - a)) {
            sum += v;
            continue;
        }
        if (++used > max_intervals)
            throw std::runtime_error("integrate_adaptive: interval budget exhausted");
        const double mid = 0.5 * (s.a + s.b);
        stack.push_back({s.a, mid});
        stack.push_back({mid, s.b});
    }
    return static_cast<double>(sum);
}

// Integral over (0, inf) via the rational map rho = u/(1-u).
template <typename F>
double integrate_half_line(const F& f, double rel_tol = 1e-8) {
    auto mapped = [&](double u) {
        const double w = 1.0 - u;
        const double rho = u / w;
        return f(rho) / (w * w);
    };
    return integrate_adaptive(mapped, 0.0, 1.0, rel_tol);
}

}  // namespace bridgevol::quadrature
