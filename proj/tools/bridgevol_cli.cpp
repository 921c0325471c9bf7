// Command-line front end: reproduces the analytic variance/bias curves,
// sample panels, the simulated-diagram benchmark table and estimator runs on
// user data, writing plain CSV plus a JSON sidecar per command.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bridgevol/density.hpp"
#include "bridgevol/diagram.hpp"
#include "bridgevol/empirical.hpp"
#include "bridgevol/estimators.hpp"
#include "bridgevol/io.hpp"
#include "bridgevol/parallel.hpp"
#include "bridgevol/stochastic.hpp"
#include "bridgevol/weights.hpp"

namespace fs = std::filesystem;
using namespace bridgevol;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitInputError = 3;
constexpr int kExitNumericalError = 4;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Key-value parameter bag: builtin defaults, overlaid by --config file
// entries, overlaid by explicitly passed CLI flags.
class Params {
public:
    void set_default(const std::string& key, const std::string& value) {
        if (!values_.count(key)) values_[key] = value;
    }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    void load_config_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("config file not readable: " + path);
        std::string first;
        std::getline(in, first);
        in.seekg(0);
        if (!first.empty() && first[0] == '{') {
            // A sidecar JSON doubles as a config file.
            nlohmann::json j = nlohmann::json::parse(in);
            const auto& cfg = j.contains("config") ? j["config"] : j;
            for (const auto& [key, value] : cfg.items())
                values_[key] = value.is_string() ? value.get<std::string>() : value.dump();
            return;
        }
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            const auto eq = line.find('=');
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            if (eq == std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": expected key = value");
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
    }

    double number(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw std::invalid_argument("missing parameter: " + key);
        try {
            std::size_t used = 0;
            const double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument(key);
            return v;
        } catch (...) {
            throw std::invalid_argument("parameter " + key + " is not a number: " +
                                        it->second);
        }
    }
    std::uint64_t count(const std::string& key) const {
        const double v = number(key);
        if (v < 0 || v != std::floor(v))
            throw std::invalid_argument("parameter " + key + " must be a nonnegative integer");
        return static_cast<std::uint64_t>(v);
    }
    std::string text(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw std::invalid_argument("missing parameter: " + key);
        return it->second;
    }
    bool has(const std::string& key) const { return values_.count(key) > 0; }

    nlohmann::ordered_json echo() const {
        nlohmann::ordered_json j;
        for (const auto& [key, value] : values_) j[key] = value;
        return j;
    }

private:
    std::map<std::string, std::string> values_;
};

std::vector<double> parse_grid(const std::string& text) {
    // Either "a:b:n" (n equally spaced points) or a comma list.
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        double a = 0, b = 0;
        int n = 0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3 || n < 1)
            throw std::invalid_argument("bad grid spec: " + text);
        for (int i = 0; i < n; ++i)
            grid.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
        return grid;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
    if (grid.empty()) throw std::invalid_argument("empty grid spec");
    return grid;
}

fs::path prepare_out_dir(const Params& params) {
    const fs::path dir = params.text("out");
    fs::create_directories(dir);
    return dir;
}

void write_sidecar_for(const fs::path& dir, const std::string& command,
                       const Params& params) {
    io::write_sidecar((dir / (command + ".sidecar.json")).string(), command, params.echo());
}

diagram::BuildOptions build_options(const Params& params) {
    diagram::BuildOptions opt;
    const int grid = static_cast<int>(params.count("grid"));
    opt.grid = diagram::GridSpec{grid, grid};
    return opt;
}

// ---------------------------------------------------------------- commands

int cmd_variance_curve(const Params& params) {
    const fs::path dir = prepare_out_dir(params);
    const double lambda = params.number("lambda");
    const double gamma = params.number("gamma");
    const auto kappas = parse_grid(params.text("kappa-grid"));
    const std::string estimators = params.text("estimators");
    const bool want_me = estimators.find("me") != std::string::npos;
    const bool want_gk = estimators.find("gk") != std::string::npos;
    const bool want_park = estimators.find("park") != std::string::npos;
    const auto opt = build_options(params);

    std::string csv = "kappa";
    if (want_me) csv += ",var_me";
    if (want_gk) csv += ",var_gk";
    if (want_park) csv += ",var_park";
    csv += "\n";
    for (double kappa : kappas) {
        csv += io::format_double(kappa);
        if (want_me) {
            double var;
            if (gamma == 0.0) {
                var = 1.0 / diagram::efficiency_functional(lambda, kappa, 0.0,
                                                           opt.quadrature) -
                      1.0;
            } else {
                const auto me = diagram::build_most_efficient(lambda, kappa, 0.0, opt);
                var = diagram::moments(me, gamma, opt.quadrature).variance;
            }
            csv += "," + io::format_double(var);
        }
        if (want_gk) {
            const auto gk = diagram::build_garman_klass(lambda, kappa, opt);
            csv += "," + io::format_double(diagram::moments(gk, gamma, opt.quadrature).variance);
        }
        if (want_park) {
            const auto park = diagram::build_parkinson(lambda, kappa, opt);
            csv +=
                "," + io::format_double(diagram::moments(park, gamma, opt.quadrature).variance);
        }
        csv += "\n";
    }
    io::write_text_file((dir / "variance_curve.csv").string(), csv);
    write_sidecar_for(dir, "variance-curve", params);
    return kExitOk;
}

int cmd_bias_curve(const Params& params) {
    const fs::path dir = prepare_out_dir(params);
    const auto kappas = parse_grid(params.text("kappa-grid"));
    const auto opt = build_options(params);
    std::string csv = "kappa,mean_gk,mean_park\n";
    for (double kappa : kappas) {
        // Un-normalized canonical means of the quadratic bridge estimators.
        const auto quad = diagram::make_skappa_quadrature(kappa, opt.quadrature);
        weights::WeightField g2;
        g2.lambda = 2.0;
        g2.kappa = kappa;
        const auto g = weights::weight_on_grid_cached(g2, quad.id, quad.points);
        long double mean_gk = 0.0L, mean_park = 0.0L;
        for (std::size_t i = 0; i < quad.points.size(); ++i) {
            const auto [theta, phi] = quad.points[i];
            mean_gk += static_cast<long double>(quad.weights[i]) * (*g)[i] *
                       diagram::psi_garman_klass(theta, phi, kappa);
            mean_park += static_cast<long double>(quad.weights[i]) * (*g)[i] *
                         diagram::psi_parkinson(theta, phi);
        }
        csv += io::format_double(kappa) + "," +
               io::format_double(static_cast<double>(mean_gk)) + "," +
               io::format_double(static_cast<double>(mean_park)) + "\n";
    }
    io::write_text_file((dir / "bias_curve.csv").string(), csv);
    write_sidecar_for(dir, "bias-curve", params);
    return kExitOk;
}

int cmd_sample_panel(const Params& params) {
    const fs::path dir = prepare_out_dir(params);
    const std::uint64_t n = params.count("n");
    if (n < 1) throw std::invalid_argument("sample-panel: n must be >= 1");
    const double kappa = params.number("kappa");
    const double gamma = params.number("gamma");
    const auto opt = build_options(params);

    stochastic::ProcessConfig config;
    config.gamma = gamma;
    config.kappa = kappa;
    config.ticks = static_cast<int>(params.number("K"));
    config.validate();

    const auto me = diagram::build_most_efficient(2.0, kappa, 0.0, opt);
    const auto gk = diagram::build_garman_klass(2.0, kappa, opt);
    const auto park = diagram::build_parkinson(2.0, kappa, opt);

    // Common random numbers: all estimators see the same OHLC samples.
    const auto samples = stochastic::monte_carlo_ohlc(config, n, params.count("seed"));
    std::string csv = "idx,me,gk,park\n";
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto p = diagram::to_spherical(samples[i]);
        const double r2 = p.r * p.r;
        csv += std::to_string(i) + "," + io::format_double(r2 * me.value(p.theta, p.phi)) +
               "," + io::format_double(r2 * gk.value(p.theta, p.phi)) + "," +
               io::format_double(r2 * park.value(p.theta, p.phi)) + "\n";
    }
    io::write_text_file((dir / "sample_panel.csv").string(), csv);
    write_sidecar_for(dir, "sample-panel", params);
    return kExitOk;
}

int cmd_table1(const Params& params) {
    const fs::path dir = prepare_out_dir(params);
    empirical::Table1Options opt;
    opt.tick_counts.clear();
    for (const auto& item : parse_grid(params.text("K-list") == "default"
                                           ? "10,100,1000,-1"
                                           : params.text("K-list")))
        opt.tick_counts.push_back(static_cast<int>(item));
    opt.construction_samples = params.count("M");
    opt.evaluation_samples = params.count("N");
    opt.seed = params.count("seed");
    opt.threads = static_cast<int>(params.count("threads"));
    const int grid = static_cast<int>(params.count("grid-bins"));
    opt.grid = diagram::GridSpec{grid, grid};

    const auto rows = empirical::table1_benchmark(opt);
    std::ostringstream csv;
    empirical::write_table1_csv(csv, rows);
    io::write_text_file((dir / "table1.csv").string(), csv.str());

    nlohmann::ordered_json details = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json r;
        r["K"] = row.ticks == stochastic::ProcessConfig::kContinuousTicks
                     ? nlohmann::ordered_json("inf")
                     : nlohmann::ordered_json(row.ticks);
        for (const auto& [name, cell] :
             {std::pair{"gk_k0", row.gk_k0}, {"me_k0", row.me_k0}, {"gk_k1", row.gk_k1},
              {"me_k1", row.me_k1}}) {
            r[name] = {{"variance", cell.variance},
                       {"se", cell.standard_error},
                       {"mean", cell.mean}};
        }
        details.push_back(r);
    }
    io::write_text_file((dir / "table1_details.json").string(), details.dump(2) + "\n");
    write_sidecar_for(dir, "table1", params);
    return kExitOk;
}

int cmd_diagram_dump(const Params& params) {
    const fs::path dir = prepare_out_dir(params);
    const std::string what = params.text("what");
    const double lambda = params.number("lambda");
    const double kappa = params.number("kappa");
    const auto opt = build_options(params);
    if (what == "density") {
        // Joint-density dump over a box grid, for plotting and diagnostics.
        density::DensityParams dp;
        dp.kappa = kappa;
        dp.gamma = params.number("gamma");
        const int n = std::max(2, static_cast<int>(params.count("grid-bins")));
        std::string csv = "h,l,c,q\n";
        for (int i = 0; i < n; ++i) {
            const double h = 3.0 * (i + 0.5) / n;
            for (int j = 0; j < n; ++j) {
                const double l = -3.0 * (j + 0.5) / n;
                for (int k = 0; k < n; ++k) {
                    const double cval = -3.0 + 6.0 * (k + 0.5) / n;
                    csv += io::format_double(h) + "," + io::format_double(l) + "," +
                           io::format_double(cval) + "," +
                           io::format_double(density::joint_pdf(h, l, cval, dp)) + "\n";
                }
            }
        }
        io::write_text_file((dir / "density_grid.csv").string(), csv);
        write_sidecar_for(dir, "diagram-dump", params);
        return kExitOk;
    }
    if (what == "synthetic-weight" || what == "synthetic") {
        stochastic::ProcessConfig config;
        config.gamma = params.number("gamma");
        config.kappa = kappa;
        config.ticks = static_cast<int>(params.number("K"));
        empirical::SynthesisOptions sopt;
        const int bins = static_cast<int>(params.count("grid-bins"));
        sopt.grid = diagram::GridSpec{bins, bins};
        sopt.samples = params.count("M");
        sopt.seed = params.count("seed");
        sopt.threads = static_cast<int>(params.count("threads"));
        if (what == "synthetic-weight") {
            const auto w = empirical::synthesize_weight(config, lambda, sopt);
            std::ostringstream csv;
            empirical::save_binned_weight(csv, w);
            io::write_text_file((dir / "binned_weight.csv").string(), csv.str());
        } else {
            const auto ws = empirical::synthesize_weights(config, {lambda, 2.0 * lambda},
                                                          sopt);
            const auto d = empirical::synthesize_diagram(ws[0], ws[1]);
            diagram::save_diagram_file((dir / "synthetic_diagram.csv").string(), d);
        }
        write_sidecar_for(dir, "diagram-dump", params);
        return kExitOk;
    }
    if (what == "weight") {
        // Pointwise weight-field dump over the grid centers.
        weights::WeightField field;
        field.lambda = lambda;
        field.kappa = kappa;
        field.gamma = params.number("gamma");
        field.mode = field.gamma == 0.0 ? weights::WeightMode::closed_form_gamma0
                                        : weights::WeightMode::kummer_series;
        const diagram::DomainSkappa domain{kappa};
        std::string csv = "theta,phi,g\n";
        for (int i = 0; i < opt.grid.n_phi; ++i) {
            const double phi = opt.grid.phi_center(i);
            for (int j = 0; j < opt.grid.n_s; ++j) {
                const double theta = domain.theta_of_s(opt.grid.s_center(j), phi);
                csv += io::format_double(theta) + "," + io::format_double(phi) + "," +
                       io::format_double(weights::weight(theta, phi, field)) + "\n";
            }
        }
        io::write_text_file((dir / "weight_grid.csv").string(), csv);
    } else {
        diagram::Diagram d;
        if (what == "me")
            d = diagram::build_most_efficient(lambda, kappa, params.number("gamma"), opt);
        else if (what == "gk")
            d = diagram::build_garman_klass(lambda, kappa, opt);
        else if (what == "park")
            d = diagram::build_parkinson(lambda, kappa, opt);
        else
            throw std::invalid_argument("diagram-dump: unknown kind " + what);
        diagram::save_diagram_file((dir / (what + "_diagram.csv")).string(), d);
    }
    write_sidecar_for(dir, "diagram-dump", params);
    return kExitOk;
}

int cmd_simulate(const Params& params) {
    const fs::path dir = prepare_out_dir(params);
    const std::string what = params.text("what");
    stochastic::ProcessConfig config;
    config.gamma = params.number("gamma");
    config.kappa = params.number("kappa");
    config.ticks = static_cast<int>(params.number("K"));
    config.validate();
    const std::uint64_t seed = params.count("seed");

    if (what == "path") {
        const auto path = stochastic::simulate_path(config, seed);
        std::string csv = "t,value\n";
        for (Eigen::Index k = 0; k < path.times.size(); ++k)
            csv += io::format_double(path.times[k]) + "," +
                   io::format_double(path.values[k]) + "\n";
        io::write_text_file((dir / "path.csv").string(), csv);
    } else if (what == "ohlc") {
        const auto samples = stochastic::monte_carlo_ohlc(
            config, params.count("n"), seed, static_cast<int>(params.count("threads")));
        std::string csv = "h,l,c,kappa\n";
        for (const auto& s : samples)
            csv += io::format_double(s.h) + "," + io::format_double(s.l) + "," +
                   io::format_double(s.c) + "," + io::format_double(s.kappa) + "\n";
        io::write_text_file((dir / "ohlc.csv").string(), csv);
    } else if (what == "ticks") {
        // One long log-price path A(t) = mu t + sigma W(t) written as
        // (t, price) rows covering n intervals of length T with K ticks each.
        const double sigma = params.number("sigma");
        const double T = params.number("T");
        const double price0 = params.number("price0");
        const std::uint64_t n = params.count("n");
        const int K = config.effective_ticks();
        const double mu = config.gamma * sigma / std::sqrt(T);
        const rng::Stream stream(seed, 0);
        std::string csv = "t,price\n";
        double log_price = 0.0;
        csv += io::format_double(0.0) + "," + io::format_double(price0) + "\n";
        for (std::uint64_t interval = 0; interval < n; ++interval) {
            rng::ItemCursor cursor(stream, interval);
            for (int k = 1; k <= K; ++k) {
                const double t = (interval + static_cast<double>(k) / K) * T;
                log_price += mu * T / K + sigma * std::sqrt(T / K) * cursor.gaussian();
                csv += io::format_double(t) + "," +
                       io::format_double(price0 * std::exp(log_price)) + "\n";
            }
        }
        io::write_text_file((dir / "ticks.csv").string(), csv);
    } else {
        throw std::invalid_argument("simulate: unknown output kind " + what);
    }
    write_sidecar_for(dir, "simulate", params);
    return kExitOk;
}

struct IntervalOhlc {
    stochastic::OhlcSample sample;
    double T = 1.0;
};

std::vector<IntervalOhlc> read_ohlc_csv(const std::string& path, double kappa,
                                        std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input: " + path);
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty input file: " + path);
    if (io::split_csv_line(line) !=
        std::vector<std::string>{"open", "high", "low", "close", "t_start", "t_end"})
        throw InputError("expected header open,high,low,close,t_start,t_end");
    if (std::fabs(kappa) > 1e-12)
        throw InputError(
            "OHLC input provides no intra-interval path, so only kappa = 0 diagrams "
            "apply; supply tick input for bridges");
    std::vector<IntervalOhlc> rows;
    int line_no = 1;
    double last_t = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = io::split_csv_line(line);
        auto bad = [&](const std::string& why) {
            warnings->push_back("line " + std::to_string(line_no) + ": " + why);
        };
        if (fields.size() != 6) {
            bad("expected 6 fields");
            continue;
        }
        double v[6];
        bool ok = true;
        for (int i = 0; i < 6; ++i) {
            try {
                v[i] = std::stod(fields[i]);
            } catch (...) {
                ok = false;
            }
        }
        if (!ok) {
            bad("unparseable number");
            continue;
        }
        const double open = v[0], high = v[1], low = v[2], close = v[3];
        if (!(open > 0 && high > 0 && low > 0 && close > 0)) {
            bad("prices must be positive");
            continue;
        }
        if (!(v[5] > v[4])) {
            bad("t_end must exceed t_start");
            continue;
        }
        if (v[4] < last_t) {
            bad("timestamps not monotone");
            continue;
        }
        last_t = v[4];
        IntervalOhlc row;
        // Log scale, offset by the open.
        row.sample.h = std::log(high / open);
        row.sample.l = std::log(low / open);
        row.sample.c = std::log(close / open);
        row.sample.kappa = 0.0;
        row.T = v[5] - v[4];
        rows.push_back(row);
    }
    return rows;
}

std::vector<IntervalOhlc> read_ticks_csv(const std::string& path, double kappa, double T,
                                         std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input: " + path);
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty input file: " + path);
    if (io::split_csv_line(line) != std::vector<std::string>{"t", "price"})
        throw InputError("expected header t,price");
    std::vector<double> times, log_prices;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = io::split_csv_line(line);
        if (fields.size() != 2) {
            warnings->push_back("line " + std::to_string(line_no) + ": expected 2 fields");
            continue;
        }
        try {
            const double t = std::stod(fields[0]);
            const double price = std::stod(fields[1]);
            if (!(price > 0)) throw InputError("price");
            if (!times.empty() && t < times.back())
                throw InputError("timestamps not monotone at line " +
                                 std::to_string(line_no));
            times.push_back(t);
            log_prices.push_back(std::log(price));
        } catch (const InputError&) {
            throw;
        } catch (...) {
            warnings->push_back("line " + std::to_string(line_no) + ": unparseable number");
        }
    }
    if (times.size() < 2) throw InputError("need at least two ticks");

    // Group ticks into nominal intervals of length T; the closing tick of one
    // interval opens the next. Bridge OHLC comes from the intra-interval
    // path of log-price offsets.
    std::vector<IntervalOhlc> rows;
    const double eps = 1e-9 * T;
    std::size_t first = 0;
    for (;;) {
        const double start = times[first];
        const double end = start + T;
        std::size_t last = first;
        while (last + 1 < times.size() && times[last + 1] <= end + eps) ++last;
        if (last == first) break;                   // no further ticks in range
        if (times[last] < end - eps) break;         // trailing partial interval
        const double a0 = log_prices[first];
        const double c = log_prices[last] - a0;
        double hi = 0.0, lo = 0.0;
        for (std::size_t k = first; k <= last; ++k) {
            const double t_frac = (times[k] - start) / T;
            const double y = (log_prices[k] - a0) - kappa * t_frac * c;
            hi = std::max(hi, y);
            lo = std::min(lo, y);
        }
        IntervalOhlc row;
        row.sample = {hi, lo, c, kappa};
        row.T = T;
        rows.push_back(row);
        first = last;
        if (first + 1 >= times.size()) break;
    }
    return rows;
}

int cmd_estimate(const Params& params) {
    const fs::path dir = prepare_out_dir(params);
    const std::string input = params.text("input");
    const std::string input_kind = params.text("input-kind");
    const double lambda = params.number("lambda");
    const double kappa = params.number("kappa");
    const auto opt = build_options(params);

    diagram::Diagram diag;
    const std::string estimator = params.text("estimator");
    if (estimator == "me")
        diag = diagram::build_most_efficient(lambda, kappa, params.number("gamma"), opt);
    else if (estimator == "gk")
        diag = diagram::build_garman_klass(lambda, kappa, opt);
    else if (estimator == "park")
        diag = diagram::build_parkinson(lambda, kappa, opt);
    else if (estimator == "file")
        diag = diagram::load_diagram_file(params.text("diagram-file"));
    else
        throw std::invalid_argument("estimate: unknown estimator " + estimator);
    if (diag.kappa != kappa)
        throw std::invalid_argument("diagram kappa does not match --kappa");

    std::vector<std::string> warnings;
    std::vector<IntervalOhlc> rows;
    if (input_kind == "ohlc")
        rows = read_ohlc_csv(input, kappa, &warnings);
    else if (input_kind == "ticks")
        rows = read_ticks_csv(input, kappa, params.number("interval"), &warnings);
    else
        throw std::invalid_argument("estimate: unknown input kind " + input_kind);
    if (rows.empty()) throw InputError("no usable intervals in input");

    // Per-interval estimates: h_lambda applied to the raw log offsets, which
    // targets (sigma^2 T)^(lambda/2) for the interval. The annualized value
    // divides by T^(lambda/2).
    std::string csv = "estimate\n";
    std::vector<double> estimates;
    long double annualized = 0.0L;
    std::uint64_t rejected = 0;
    for (const auto& row : rows) {
        try {
            const double value = estimators::estimate_one(
                row.sample, row.T, diag, estimators::OutputScale::canonical);
            estimates.push_back(value);
            annualized += value / std::pow(row.T, 0.5 * diag.lambda);
            csv += io::format_double(value) + "\n";
        } catch (const std::domain_error& e) {
            ++rejected;
            warnings.push_back(std::string("sample rejected: ") + e.what());
        }
    }
    if (estimates.empty()) throw InputError("all rows were rejected");
    io::write_text_file((dir / "estimates.csv").string(), csv);

    long double mean = 0.0L;
    for (double e : estimates) mean += e;
    mean /= estimates.size();
    long double ss = 0.0L;
    for (double e : estimates) ss += (e - mean) * (e - mean);
    const double variance =
        estimates.size() > 1 ? static_cast<double>(ss / (estimates.size() - 1)) : 0.0;

    nlohmann::ordered_json report;
    report["n"] = estimates.size();
    report["rejected"] = rejected;
    report["mean"] = static_cast<double>(mean);
    report["variance"] = variance;
    report["standard_error"] = std::sqrt(variance / estimates.size());
    report["annualized_mean"] = static_cast<double>(annualized / estimates.size());
    report["warnings"] = warnings;
    io::write_text_file((dir / "estimate_report.json").string(), report.dump(2) + "\n");
    write_sidecar_for(dir, "estimate", params);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Most-efficient homogeneous OHLC bridge estimators of volatility"};
    app.require_subcommand(1);

    Params params;
    std::string config_path;
    std::map<std::string, std::string> cli_overrides;

    auto add_common = [&](CLI::App* cmd, const std::vector<std::pair<std::string, std::string>>&
                                             defaults) {
        cmd->add_option("--config", config_path, "key = value config file or sidecar JSON");
        for (const auto& [key, value] : defaults) params.set_default(key, value);
        static const std::vector<std::pair<std::string, std::string>> common = {
            {"lambda", "order of the estimated volatility"},
            {"kappa", "bridge coefficient"},
            {"gamma", "normalized drift"},
            {"K", "ticks per interval (-1 = continuous limit)"},
            {"M", "construction sample count"},
            {"N", "evaluation sample count"},
            {"grid", "diagram grid resolution per axis"},
            {"seed", "master seed"},
            {"out", "output directory"},
            {"threads", "worker threads"},
            {"n", "sample count"},
            {"kappa-grid", "kappa grid, a:b:n or comma list"},
            {"estimators", "comma list of me,gk,park"},
            {"what", "output kind"},
            {"input", "input CSV path"},
            {"input-kind", "ohlc or ticks"},
            {"estimator", "me, gk, park or file"},
            {"diagram-file", "serialized diagram path"},
            {"interval", "tick-grouping interval length"},
            {"sigma", "volatility for tick synthesis"},
            {"T", "interval length for tick synthesis"},
            {"price0", "initial price for tick synthesis"},
            {"K-list", "comma list of tick counts, -1 = analytic limit"},
            {"grid-bins", "histogram bins per axis"}};
        for (const auto& [key, help] : common) {
            cmd->add_option_function<std::string>(
                "--" + key, [&cli_overrides, k = key](const std::string& v) {
                    cli_overrides[k] = v;
                },
                help);
        }
    };

    const std::vector<std::pair<std::string, std::string>> base_defaults = {
        {"lambda", "2"},   {"kappa", "0"},     {"gamma", "0"},     {"K", "-1"},
        {"M", "10000000"}, {"N", "1000000"},   {"grid", "200"},    {"seed", "1"},
        {"out", "."},      {"threads", "0"},   {"n", "200"},       {"kappa-grid", "0:1:21"},
        {"estimators", "me,gk,park"},          {"what", "ohlc"},   {"input-kind", "ohlc"},
        {"estimator", "me"},                   {"interval", "1"},  {"sigma", "0.2"},
        {"T", "1"},        {"price0", "100"},  {"K-list", "default"}, {"grid-bins", "50"}};

    auto* variance = app.add_subcommand("variance-curve",
                                        "analytic estimator variances over a kappa grid");
    add_common(variance, base_defaults);
    auto* bias = app.add_subcommand("bias-curve",
                                    "canonical means of the classical bridge estimators");
    add_common(bias, base_defaults);
    auto* panel = app.add_subcommand("sample-panel",
                                     "per-realization estimates on common random paths");
    add_common(panel, base_defaults);
    auto* estimate = app.add_subcommand("estimate", "run estimators on OHLC or tick data");
    add_common(estimate, base_defaults);
    auto* table1 = app.add_subcommand("table1", "simulated-diagram benchmark table");
    add_common(table1, base_defaults);
    auto* dump = app.add_subcommand("diagram-dump", "serialize a diagram or weight grid");
    add_common(dump, base_defaults);
    auto* simulate = app.add_subcommand("simulate", "write paths, OHLC samples or ticks");
    add_common(simulate, base_defaults);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (!config_path.empty()) params.load_config_file(config_path);
        for (const auto& [key, value] : cli_overrides) params.set(key, value);
        if (params.count("threads") == 0)
            params.set("threads", std::to_string(parallel::default_threads()));
        if (app.got_subcommand(variance)) return cmd_variance_curve(params);
        if (app.got_subcommand(bias)) return cmd_bias_curve(params);
        if (app.got_subcommand(panel)) return cmd_sample_panel(params);
        if (app.got_subcommand(estimate)) return cmd_estimate(params);
        if (app.got_subcommand(table1)) return cmd_table1(params);
        if (app.got_subcommand(dump)) return cmd_diagram_dump(params);
        if (app.got_subcommand(simulate)) return cmd_simulate(params);
        return kExitConfigError;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const SeriesNonConvergence& e) {
        std::cerr << "numerical non-convergence: " << e.what() << "\n";
        return kExitNumericalError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        const std::string what = e.what();
        if (what.find("budget") != std::string::npos ||
            what.find("converge") != std::string::npos) {
            std::cerr << "numerical non-convergence: " << what << "\n";
            return kExitNumericalError;
        }
        std::cerr << "error: " << what << "\n";
        return 1;
    }
}
