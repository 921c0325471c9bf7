#include "bridgevol/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bridgevol/weights.hpp"

namespace bridgevol::diagram {

namespace {

constexpr double k1 = 0.511;
constexpr double k2 = 0.019;
constexpr double k3 = 0.383;
constexpr double kFourLn2 = 2.772588722239781;  // 4 ln 2

weights::WeightField make_field(double lambda, double kappa, double gamma,
                                const SeriesPolicy& series) {
    weights::WeightField field;
    field.lambda = lambda;
    field.kappa = kappa;
    field.gamma = gamma;
    field.series = series;
    field.mode = (gamma == 0.0) ? weights::WeightMode::closed_form_gamma0
                                : weights::WeightMode::kummer_series;
    return field;
}

double classical_raw(DiagramKind kind, double theta, double phi, double kappa) {
    return kind == DiagramKind::garman_klass ? psi_garman_klass(theta, phi, kappa)
                                             : psi_parkinson(theta, phi);
}

}  // namespace

const char* kind_name(DiagramKind kind) {
    switch (kind) {
        case DiagramKind::most_efficient: return "most_efficient";
        case DiagramKind::garman_klass: return "garman_klass";
        case DiagramKind::parkinson: return "parkinson";
        case DiagramKind::custom_grid: return "custom_grid";
    }
    return "unknown";
}

DiagramKind kind_from_name(const std::string& name) {
    if (name == "most_efficient") return DiagramKind::most_efficient;
    if (name == "garman_klass") return DiagramKind::garman_klass;
    if (name == "parkinson") return DiagramKind::parkinson;
    if (name == "custom_grid") return DiagramKind::custom_grid;
    throw std::invalid_argument("unknown diagram kind: " + name);
}

double psi_garman_klass(double theta, double phi, double kappa) {
    const double ct = std::cos(theta);
    const double cp = std::cos(phi), sp = std::sin(phi);
    const double u = 1.0 - kappa;
    return k1 * ct * ct * (cp - sp) * (cp - sp) +
           k2 * (ct * ct * std::sin(2.0 * phi) -
                 0.5 * u * std::sin(2.0 * theta) * (cp + sp)) -
           k3 * u * u * std::sin(theta) * std::sin(theta);
}

double psi_parkinson(double theta, double phi) {
    const double ct = std::cos(theta);
    return ct * ct * (1.0 - std::sin(2.0 * phi)) / kFourLn2;
}

double Diagram::value(double theta, double phi) const {
    if (!is_gridded()) {
        const double raw = std::max(0.0, classical_raw(kind, theta, phi, kappa));
        return std::pow(raw, 0.5 * lambda) / normalizer;
    }
    const DomainSkappa dom = domain();
    const double s = dom.s_of_theta(theta, phi);
    // Fractional cell coordinates; the outer half-cells extend constantly.
    double x = phi / grid.phi_width() + static_cast<double>(grid.n_phi) - 0.5;
    double y = s / grid.s_width() - 0.5;
    x = std::clamp(x, 0.0, static_cast<double>(grid.n_phi - 1));
    y = std::clamp(y, 0.0, static_cast<double>(grid.n_s - 1));
    const int i0 = std::min(grid.n_phi - 2, static_cast<int>(x));
    const int j0 = std::min(grid.n_s - 2, static_cast<int>(y));
    const double fx = std::clamp(x - i0, 0.0, 1.0);
    const double fy = std::clamp(y - j0, 0.0, 1.0);
    return (1.0 - fx) * ((1.0 - fy) * table(i0, j0) + fy * table(i0, j0 + 1)) +
           fx * ((1.0 - fy) * table(i0 + 1, j0) + fy * table(i0 + 1, j0 + 1));
}

double efficiency_functional(double lambda, double kappa, double gamma,
                             const SkappaQuadratureSpec& spec, const SeriesPolicy& series) {
    const auto quad = make_skappa_quadrature(kappa, spec);
    const auto f1 = make_field(lambda, kappa, gamma, series);
    const auto f2 = make_field(2.0 * lambda, kappa, gamma, series);
    const auto g1 = weights::weight_on_grid_cached(f1, quad.id, quad.points);
    const auto g2 = weights::weight_on_grid_cached(f2, quad.id, quad.points);
    long double sum = 0.0L;
    for (std::size_t i = 0; i < quad.points.size(); ++i) {
        if ((*g2)[i] <= 0.0) continue;
        sum += static_cast<long double>(quad.weights[i]) * (*g1)[i] * (*g1)[i] / (*g2)[i];
    }
    return static_cast<double>(sum);
}

Diagram build_most_efficient(double lambda, double kappa, double gamma0,
                             const BuildOptions& options) {
    options.grid.validate();
    Diagram d;
    d.lambda = lambda;
    d.kappa = kappa;
    d.gamma0 = gamma0;
    d.kind = DiagramKind::most_efficient;
    d.grid = options.grid;
    d.normalizer = efficiency_functional(lambda, kappa, gamma0, options.quadrature,
                                         options.series);
    if (!(d.normalizer > 0.0))
        throw std::runtime_error("build_most_efficient: efficiency functional is not positive");

    const auto f1 = make_field(lambda, kappa, gamma0, options.series);
    const auto f2 = make_field(2.0 * lambda, kappa, gamma0, options.series);
    d.table.resize(options.grid.n_phi, options.grid.n_s);
    for (int i = 0; i < options.grid.n_phi; ++i) {
        const double phi = options.grid.phi_center(i);
        const DomainSkappa dom{kappa};
        int last_valid = -1;
        for (int j = 0; j < options.grid.n_s; ++j) {
            const double theta = dom.theta_of_s(options.grid.s_center(j), phi);
            const double g2 = weights::weight(theta, phi, f2);
            if (g2 > 0.0) {
                d.table(i, j) = weights::weight(theta, phi, f1) / g2 / d.normalizer;
                last_valid = j;
            } else {
                d.table(i, j) = std::numeric_limits<double>::quiet_NaN();
            }
        }
        if (last_valid < 0)
            throw std::runtime_error("build_most_efficient: no usable cell in a phi row");
        // Degenerate cells (g_2lambda underflow near the domain edge) take
        // the nearest valid value of the row.
        int prev = -1;
        for (int j = 0; j < options.grid.n_s; ++j) {
            if (!std::isnan(d.table(i, j))) {
                prev = j;
                continue;
            }
            int next = j + 1;
            while (next < options.grid.n_s && std::isnan(d.table(i, next))) ++next;
            const bool has_next = next < options.grid.n_s;
            if (prev < 0)
                d.table(i, j) = d.table(i, next);
            else if (!has_next || j - prev <= next - j)
                d.table(i, j) = d.table(i, prev);
            else
                d.table(i, j) = d.table(i, next);
        }
    }
    return d;
}

namespace {

Diagram build_classical(DiagramKind kind, double lambda, double kappa,
                        const BuildOptions& options) {
    Diagram d;
    d.lambda = lambda;
    d.kappa = kappa;
    d.gamma0 = 0.0;
    d.kind = kind;
    d.grid = options.grid;

    const auto quad = make_skappa_quadrature(kappa, options.quadrature);
    const auto field = make_field(lambda, kappa, 0.0, options.series);
    const auto g = weights::weight_on_grid_cached(field, quad.id, quad.points);

    long double norm = 0.0L, clamped = 0.0L, measure = 0.0L;
    for (std::size_t i = 0; i < quad.points.size(); ++i) {
        const auto [theta, phi] = quad.points[i];
        const double raw = classical_raw(kind, theta, phi, kappa);
        measure += quad.weights[i];
        if (raw < 0.0) {
            clamped += quad.weights[i];
            continue;
        }
        norm += static_cast<long double>(quad.weights[i]) *
                std::pow(raw, 0.5 * lambda) * (*g)[i];
    }
    d.clamped_fraction = static_cast<double>(clamped / measure);
    if (d.clamped_fraction > 1e-3)
        throw std::runtime_error("negative classical diagram mass exceeds 1e-3 of the domain");
    d.normalizer = static_cast<double>(norm);
    if (!(d.normalizer > 0.0))
        throw std::runtime_error("classical diagram normalization is not positive");
    return d;
}

}  // namespace

Diagram build_garman_klass(double lambda, double kappa, const BuildOptions& options) {
    return build_classical(DiagramKind::garman_klass, lambda, kappa, options);
}

Diagram build_parkinson(double lambda, double kappa, const BuildOptions& options) {
    return build_classical(DiagramKind::parkinson, lambda, kappa, options);
}

EfficiencyReport moments(const Diagram& diagram, double gamma,
                         const SkappaQuadratureSpec& spec, const SeriesPolicy& series) {
    const auto quad = make_skappa_quadrature(diagram.kappa, spec);
    const auto f1 = make_field(diagram.lambda, diagram.kappa, gamma, series);
    const auto f2 = make_field(2.0 * diagram.lambda, diagram.kappa, gamma, series);
    const auto g1 = weights::weight_on_grid_cached(f1, quad.id, quad.points);
    const auto g2 = weights::weight_on_grid_cached(f2, quad.id, quad.points);
    long double mean = 0.0L, second = 0.0L;
    for (std::size_t i = 0; i < quad.points.size(); ++i) {
        const auto [theta, phi] = quad.points[i];
        const double psi = diagram.value(theta, phi);
        mean += static_cast<long double>(quad.weights[i]) * psi * (*g1)[i];
        second += static_cast<long double>(quad.weights[i]) * psi * psi * (*g2)[i];
    }
    EfficiencyReport report;
    report.mean = static_cast<double>(mean);
    report.variance = static_cast<double>(second - mean * mean);
    report.design = {diagram.lambda, diagram.kappa, diagram.gamma0};
    return report;
}

namespace {

std::string format17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double parse_field(const std::string& header, const std::string& key) {
    const auto pos = header.find(key + "=");
    if (pos == std::string::npos)
        throw std::runtime_error("diagram header: missing field " + key);
    return std::strtod(header.c_str() + pos + key.size() + 1, nullptr);
}

}  // namespace

void save_diagram(std::ostream& out, const Diagram& d) {
    out << "# bridgevol diagram v1\n";
    out << "# kind=" << kind_name(d.kind) << " lambda=" << format17(d.lambda)
        << " kappa=" << format17(d.kappa) << " gamma0=" << format17(d.gamma0)
        << " normalizer=" << format17(d.normalizer)
        << " clamped_fraction=" << format17(d.clamped_fraction)
        << " n_phi=" << (d.is_gridded() ? d.grid.n_phi : 0)
        << " n_s=" << (d.is_gridded() ? d.grid.n_s : 0) << "\n";
    if (!d.is_gridded()) return;
    out << "phi_index,s_index,psi\n";
    for (int i = 0; i < d.grid.n_phi; ++i)
        for (int j = 0; j < d.grid.n_s; ++j)
            out << i << "," << j << "," << format17(d.table(i, j)) << "\n";
}

Diagram load_diagram(std::istream& in) {
    std::string magic, header;
    if (!std::getline(in, magic) || magic != "# bridgevol diagram v1")
        throw std::runtime_error("diagram file: bad magic line");
    if (!std::getline(in, header))
        throw std::runtime_error("diagram file: missing header");
    Diagram d;
    const auto kind_pos = header.find("kind=");
    const auto kind_end = header.find(' ', kind_pos);
    d.kind = kind_from_name(header.substr(kind_pos + 5, kind_end - kind_pos - 5));
    d.lambda = parse_field(header, "lambda");
    d.kappa = parse_field(header, "kappa");
    d.gamma0 = parse_field(header, "gamma0");
    d.normalizer = parse_field(header, "normalizer");
    d.clamped_fraction = parse_field(header, "clamped_fraction");
    const int n_phi = static_cast<int>(parse_field(header, "n_phi"));
    const int n_s = static_cast<int>(parse_field(header, "n_s"));
    if (n_phi == 0) return d;
    d.grid = GridSpec{n_phi, n_s};
    d.table.resize(n_phi, n_s);
    std::string line;
    if (!std::getline(in, line) || line != "phi_index,s_index,psi")
        throw std::runtime_error("diagram file: missing column header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int i = 0, j = 0;
        char* end = nullptr;
        i = static_cast<int>(std::strtol(line.c_str(), &end, 10));
        j = static_cast<int>(std::strtol(end + 1, &end, 10));
        d.table(i, j) = std::strtod(end + 1, nullptr);
    }
    return d;
}

void save_diagram_file(const std::string& path, const Diagram& d) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    save_diagram(out, d);
}

Diagram load_diagram_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return load_diagram(in);
}

}  // namespace bridgevol::diagram
