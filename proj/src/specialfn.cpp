#include "bridgevol/specialfn.hpp"

#include <cmath>
#include <limits>

namespace bridgevol::specialfn {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr int kKummerMaxTerms = 20000;

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && std::fabs(x - std::nearbyint(x)) < 1e-12;
}

// Minimal double-double accumulator (Knuth two-sum), used only as the
// fallback path when the plain series is cancellation-dominated.
struct DoubleDouble {
    double hi = 0.0, lo = 0.0;

    void add(double x) {
        double s = hi + x;
        double bb = s - hi;
        double err = (hi - (s - bb)) + (x - bb);
        hi = s;
        lo += err;
        double t = hi + lo;
        lo -= t - hi;
        hi = t;
    }
    double value() const { return hi + lo; }
};

// Ascending series at z >= 0 (callers arrange the sign). Returns the sum and
// reports the largest partial magnitude so the caller can judge cancellation.
double kummer_series(double a, double b, double z, double* condition) {
    long double sum = 1.0L;
    long double term = 1.0L;
    long double max_partial = 1.0L;
    for (int n = 0; n < kKummerMaxTerms; ++n) {
        term *= (a + n) * z / ((b + n) * (n + 1));
        sum += term;
        max_partial = std::max(max_partial, std::fabs(sum));
        if (std::fabs(term) < 1e-18L * std::fabs(sum) && n > 2) {
            if (condition)
                *condition = static_cast<double>(max_partial / std::max(1e-300L, std::fabs(sum)));
            return static_cast<double>(sum);
        }
        if (a + n == 0.0) {  // terminating polynomial
            if (condition)
                *condition = static_cast<double>(max_partial / std::max(1e-300L, std::fabs(sum)));
            return static_cast<double>(sum);
        }
    }
    throw SeriesNonConvergence("kummer_m: series did not converge",
                               static_cast<double>(sum), kKummerMaxTerms);
}

double kummer_series_dd(double a, double b, double z) {
    DoubleDouble sum;
    sum.add(1.0);
    DoubleDouble term;
    term.add(1.0);
    for (int n = 0; n < kKummerMaxTerms; ++n) {
        double factor = (a + n) * z / ((b + n) * (n + 1));
        double t = term.value() * factor;
        term = DoubleDouble{};
        term.add(t);
        sum.add(t);
        if (std::fabs(t) < 1e-34 * std::fabs(sum.value()) && n > 2) return sum.value();
        if (a + n == 0.0) return sum.value();
    }
    throw SeriesNonConvergence("kummer_m: double-double series did not converge",
                               sum.value(), kKummerMaxTerms);
}

double kummer_series_guarded(double a, double b, double z) {
    double condition = 1.0;
    double value = kummer_series(a, b, z, &condition);
    if (condition > 1e6) value = kummer_series_dd(a, b, z);
    return value;
}

}  // namespace

double gaussian_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double kummer_m(double a, double b, double z) {
    if (is_nonpositive_integer(b))
        throw std::domain_error("kummer_m: b is a nonpositive integer (pole of Gamma(b))");
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(z))
        throw std::domain_error("kummer_m: arguments must be finite");
    if (z == 0.0) return 1.0;
    if (z < 0.0) return std::exp(z) * kummer_series_guarded(b - a, b, -z);
    if (z > 50.0 && is_nonpositive_integer(b - a)) {
        // Terminating transform: exact and immune to the large-z term growth
        // (the polynomial at -z has fixed-sign terms).
        return std::exp(z) * kummer_series_guarded(b - a, b, -z);
    }
    return kummer_series_guarded(a, b, z);
}

}  // namespace bridgevol::specialfn
