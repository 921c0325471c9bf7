#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace bridgevol {

// Truncation policy for the bilateral image sums. The analytic formulas sum
// over all integers m; we expand in symmetric shells m = 0, +-1, +-2, ...
struct SeriesPolicy {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_terms = 200;  // shells per side

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw std::invalid_argument("SeriesPolicy: tolerances must be positive");
        if (max_terms < 1)
            throw std::invalid_argument("SeriesPolicy: max_terms must be >= 1");
    }
};

// Thrown when a series truncation budget is exhausted. Carries the partial
// sum and the number of shells consumed so callers can report diagnostics.
class SeriesNonConvergence : public std::runtime_error {
public:
    SeriesNonConvergence(const std::string& what, double partial, int shells)
        : std::runtime_error(what + " (partial=" + std::to_string(partial) +
                             ", shells=" + std::to_string(shells) + ")"),
          partial_value(partial),
          shells_used(shells) {}

    double partial_value;
    int shells_used;
};

struct BilateralResult {
    double value = 0.0;
    int shells_used = 0;
};

// Sum term(m) over m in Z by symmetric shell expansion. Stops once two
// consecutive shells fall below max(abs_tol, rel_tol*|sum|) on both tails.
// Accumulates in long double; the image sums encountered here cancel heavily
// near support boundaries.
template <typename Term>
BilateralResult sum_bilateral_full(const Term& term, const SeriesPolicy& policy = {}) {
    policy.validate();
    long double sum = static_cast<long double>(term(0));
    int quiet_shells = 0;
    for (int m = 1; m <= policy.max_terms; ++m) {
        const long double plus = static_cast<long double>(term(m));
        const long double minus = static_cast<long double>(term(-m));
        sum += plus + minus;
        const double shell_mag = static_cast<double>(std::fabs(plus) + std::fabs(minus));
        const double bound = std::max(policy.abs_tol,
                                      policy.rel_tol * static_cast<double>(std::fabs(sum)));
        quiet_shells = (shell_mag < bound) ? quiet_shells + 1 : 0;
        if (quiet_shells >= 2) return {static_cast<double>(sum), m};
    }
    throw SeriesNonConvergence("sum_bilateral: shell budget exhausted",
                               static_cast<double>(sum), policy.max_terms);
}

template <typename Term>
double sum_bilateral(const Term& term, const SeriesPolicy& policy = {}) {
    return sum_bilateral_full(term, policy).value;
}

}  // namespace bridgevol
