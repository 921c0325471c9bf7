#pragma once

#include "bridgevol/series.hpp"

namespace bridgevol::specialfn {

// Standard normal density.
double gaussian_pdf(double x);

// Kummer confluent hypergeometric function M(a, b, z) of the first kind.
//
// Evaluated by the ascending power series. For z < 0 the first Kummer
// transformation M(a,b,z) = e^z M(b-a, b, -z) is applied so the series runs
// at a nonnegative argument; for z > 50 with b-a a nonpositive integer the
// same transformation yields an exact terminating polynomial. All radial
// moments in this project call M with z = d^2/2a >= 0, where the series has
// eventually fixed-sign terms and no catastrophic cancellation. A compensated
// double-double pass is rerun automatically when the running condition number
// of the series exceeds 1e6.
//
// Throws std::domain_error when b is zero or a negative integer, and
// SeriesNonConvergence if the series does not settle within the term budget.
double kummer_m(double a, double b, double z);

}  // namespace bridgevol::specialfn
