#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>

#include "bridgevol/geometry.hpp"
#include "bridgevol/report.hpp"
#include "bridgevol/series.hpp"

namespace bridgevol::diagram {

enum class DiagramKind { most_efficient, garman_klass, parkinson, custom_grid };

const char* kind_name(DiagramKind kind);
DiagramKind kind_from_name(const std::string& name);

// Angular part psi_lambda(theta, phi) of a homogeneous canonical estimator,
// defined on S_kappa. Garman-Klass and Parkinson diagrams are analytic
// (closed-form psi with a quadrature normalization constant); most-efficient
// and synthetic diagrams are tables over (phi, s) cell centers with bilinear
// interpolation, clamped on the outer half-cells.
class Diagram {
public:
    double lambda = 2.0;
    double kappa = 0.0;
    double gamma0 = 0.0;
    DiagramKind kind = DiagramKind::most_efficient;
    // E_lambda for most-efficient/synthetic diagrams, M_{.,lambda}(kappa)
    // for the classical ones.
    double normalizer = 1.0;
    // Fraction of the domain measure where a negative classical psi was
    // clamped before the fractional power (nonzero only for Garman-Klass at
    // lambda not a multiple of 2).
    double clamped_fraction = 0.0;

    GridSpec grid;
    Eigen::ArrayXXd table;  // n_phi x n_s; empty for analytic kinds

    DomainSkappa domain() const { return DomainSkappa{kappa}; }
    bool is_gridded() const { return table.size() > 0; }

    // psi at a point of S_kappa (no membership check; callers gate support).
    double value(double theta, double phi) const;
};

// Raw classical quadratic forms on the sphere (before normalization and
// before the order-lambda power).
double psi_garman_klass(double theta, double phi, double kappa);
double psi_parkinson(double theta, double phi);

struct BuildOptions {
    GridSpec grid;
    SkappaQuadratureSpec quadrature;
    SeriesPolicy series;
};

// Most efficient unbiased diagram psi = (g_lambda / g_2lambda) / E_lambda at
// design drift gamma0, tabulated on the grid. Cells where g_2lambda
// underflows are filled from the nearest valid cell of the same phi row.
Diagram build_most_efficient(double lambda, double kappa, double gamma0,
                             const BuildOptions& options = {});

// Normalized Garman-Klass diagram of order lambda: psi_GK^(lambda/2) / M.
// Negative psi_GK cells are clamped to zero before the fractional power; the
// clamped measure fraction must stay below 1e-3.
Diagram build_garman_klass(double lambda, double kappa, const BuildOptions& options = {});

// Normalized Parkinson diagram of order lambda.
Diagram build_parkinson(double lambda, double kappa, const BuildOptions& options = {});

// Expected value and variance of the normalized canonical estimator with
// this diagram when the true drift is gamma, by 2-D quadrature over S_kappa.
EfficiencyReport moments(const Diagram& diagram, double gamma,
                         const SkappaQuadratureSpec& spec = {},
                         const SeriesPolicy& series = {});

// Efficiency functional E_lambda(kappa, gamma); the minimal variance of an
// unbiased order-lambda estimator is 1/E - 1.
double efficiency_functional(double lambda, double kappa, double gamma,
                             const SkappaQuadratureSpec& spec = {},
                             const SeriesPolicy& series = {});

// CSV serialization with header metadata; decimals at 17 significant digits
// round-trip bit-exactly.
void save_diagram(std::ostream& out, const Diagram& diagram);
Diagram load_diagram(std::istream& in);
void save_diagram_file(const std::string& path, const Diagram& diagram);
Diagram load_diagram_file(const std::string& path);

}  // namespace bridgevol::diagram
