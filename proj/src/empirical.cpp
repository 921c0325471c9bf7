#include "bridgevol/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "bridgevol/estimators.hpp"
#include "bridgevol/geometry.hpp"
#include "bridgevol/parallel.hpp"

namespace bridgevol::empirical {

using stochastic::OhlcSample;
using stochastic::ProcessConfig;

namespace {

constexpr std::uint64_t kChunk = 16384;

struct BinIndex {
    int i, j;
};

BinIndex locate(const diagram::GridSpec& grid, const diagram::DomainSkappa& domain,
                const diagram::SphericalPoint& p) {
    int i = static_cast<int>((p.phi + M_PI_2) / grid.phi_width());
    i = std::min(std::max(i, 0), grid.n_phi - 1);
    const double s = domain.s_of_theta(p.theta, p.phi);
    int j = static_cast<int>(s * grid.n_s);
    j = std::min(std::max(j, 0), grid.n_s - 1);
    return {i, j};
}

}  // namespace

void BinnedWeight::accumulate(const OhlcSample& s) {
    const double r2 = s.h * s.h + s.l * s.l + s.c * s.c;
    if (r2 == 0.0) return;  // degenerate walk; point mass outside the density
    const auto p = diagram::to_spherical(s);
    const auto [i, j] = locate(grid, diagram::DomainSkappa{kappa}, p);
    mass(i, j) += std::pow(p.r, lambda);
    count(i, j) += 1.0;
}

void BinnedWeight::finalize(std::uint64_t M) {
    total = M;
    mass /= static_cast<double>(M);
}

std::vector<BinnedWeight> synthesize_weights(const ProcessConfig& config,
                                             const std::vector<double>& lambdas,
                                             const SynthesisOptions& options) {
    config.validate();
    options.grid.validate();
    if (options.samples < 10'000)
        throw std::invalid_argument("synthesize_weights: need at least 10^4 samples");
    if (lambdas.empty())
        throw std::invalid_argument("synthesize_weights: no orders requested");

    auto make_empty = [&](double lambda) {
        BinnedWeight w;
        w.kappa = config.kappa;
        w.lambda = lambda;
        w.grid = options.grid;
        w.mass = Eigen::ArrayXXd::Zero(options.grid.n_phi, options.grid.n_s);
        w.count = Eigen::ArrayXXd::Zero(options.grid.n_phi, options.grid.n_s);
        return w;
    };

    const std::uint64_t n_tasks = parallel::task_count(options.samples, kChunk);
    std::vector<std::vector<BinnedWeight>> partials(n_tasks);
    const rng::Stream stream(options.seed, options.stream);
    parallel::for_each_chunk(
        options.samples, kChunk, options.threads,
        [&](std::uint64_t task, std::uint64_t begin, std::uint64_t end) {
            std::vector<BinnedWeight> local;
            local.reserve(lambdas.size());
            for (double lambda : lambdas) local.push_back(make_empty(lambda));
            Eigen::ArrayXd values;
            for (std::uint64_t m = begin; m < end; ++m) {
                stochastic::simulate_walk(config, stream, m, values);
                const OhlcSample s = stochastic::ohlc_of_walk(values, config.kappa);
                for (auto& w : local) w.accumulate(s);
            }
            partials[task] = std::move(local);
        });

    std::vector<BinnedWeight> out;
    out.reserve(lambdas.size());
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        BinnedWeight w = make_empty(lambdas[k]);
        for (std::uint64_t task = 0; task < n_tasks; ++task) {
            w.mass += partials[task][k].mass;
            w.count += partials[task][k].count;
        }
        w.finalize(options.samples);
        out.push_back(std::move(w));
    }
    return out;
}

BinnedWeight synthesize_weight(const ProcessConfig& config, double lambda,
                               const SynthesisOptions& options) {
    return synthesize_weights(config, {lambda}, options)[0];
}

diagram::Diagram synthesize_diagram(const BinnedWeight& g_lambda,
                                    const BinnedWeight& g_2lambda) {
    if (g_lambda.grid.n_phi != g_2lambda.grid.n_phi || g_lambda.grid.n_s != g_2lambda.grid.n_s)
        throw std::invalid_argument("synthesize_diagram: grids differ");
    if (g_lambda.kappa != g_2lambda.kappa)
        throw std::invalid_argument("synthesize_diagram: kappa differs");
    if (g_2lambda.lambda != 2.0 * g_lambda.lambda)
        throw std::invalid_argument("synthesize_diagram: orders must be (lambda, 2*lambda)");

    const auto& grid = g_lambda.grid;
    Eigen::ArrayXXd ratio(grid.n_phi, grid.n_s);
    std::uint64_t unusable = 0;
    for (int i = 0; i < grid.n_phi; ++i) {
        int n_valid = 0;
        for (int j = 0; j < grid.n_s; ++j) {
            const bool usable = g_lambda.count(i, j) >= 10.0 && g_2lambda.mass(i, j) > 0.0;
            if (usable) {
                ratio(i, j) = g_lambda.mass(i, j) / g_2lambda.mass(i, j);
                ++n_valid;
            } else {
                ratio(i, j) = std::numeric_limits<double>::quiet_NaN();
                ++unusable;
            }
        }
        if (n_valid == 0) {
            // Whole row empty: harmless only if it carries no mass at all.
            for (int j = 0; j < grid.n_s; ++j) ratio(i, j) = 0.0;
            continue;
        }
        int prev = -1;
        for (int j = 0; j < grid.n_s; ++j) {
            if (!std::isnan(ratio(i, j))) {
                prev = j;
                continue;
            }
            int next = j + 1;
            while (next < grid.n_s && std::isnan(ratio(i, next))) ++next;
            if (prev < 0)
                ratio(i, j) = ratio(i, next);
            else if (next >= grid.n_s || j - prev <= next - j)
                ratio(i, j) = ratio(i, prev);
            else
                ratio(i, j) = ratio(i, next);
        }
    }
    const std::uint64_t n_bins = static_cast<std::uint64_t>(grid.n_phi) * grid.n_s;
    if (unusable * 5 > n_bins)
        throw std::runtime_error(
            "synthesize_diagram: more than 20% unusable bins; increase the sample budget M");

    // In-sample unbiasedness: E-hat = sum_bins mass_lambda * ratio, which
    // reduces to sum mass_lambda^2 / mass_2lambda on usable bins.
    long double e_hat = 0.0L;
    for (int i = 0; i < grid.n_phi; ++i)
        for (int j = 0; j < grid.n_s; ++j)
            e_hat += static_cast<long double>(g_lambda.mass(i, j)) * ratio(i, j);
    if (!(e_hat > 0.0L))
        throw std::runtime_error("synthesize_diagram: empty histograms");

    diagram::Diagram d;
    d.lambda = g_lambda.lambda;
    d.kappa = g_lambda.kappa;
    d.gamma0 = 0.0;
    d.kind = diagram::DiagramKind::custom_grid;
    d.grid = grid;
    d.normalizer = static_cast<double>(e_hat);
    d.table = ratio / d.normalizer;
    return d;
}

void save_binned_weight(std::ostream& out, const BinnedWeight& w) {
    char buf[64];
    out << "phi_bin,s_bin,count,mass\n";
    for (int i = 0; i < w.grid.n_phi; ++i)
        for (int j = 0; j < w.grid.n_s; ++j) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%.0f,%.17g", i, j, w.count(i, j),
                          w.mass(i, j));
            out << buf << "\n";
        }
}

namespace {

struct MomentAccumulator {
    long double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    std::uint64_t n = 0;

    void add(double x) {
        const long double v = x;
        s1 += v;
        s2 += v * v;
        s3 += v * v * v;
        s4 += v * v * v * v;
        ++n;
    }
    void merge(const MomentAccumulator& o) {
        s1 += o.s1;
        s2 += o.s2;
        s3 += o.s3;
        s4 += o.s4;
        n += o.n;
    }
    Table1Cell cell() const {
        const long double m1 = s1 / n;
        const long double m2 = s2 / n - m1 * m1;
        // Central fourth moment from raw sums.
        const long double m4 =
            s4 / n - 4.0L * m1 * (s3 / n) + 6.0L * m1 * m1 * (s2 / n) - 3.0L * m1 * m1 * m1 * m1;
        Table1Cell cell;
        cell.mean = static_cast<double>(m1);
        cell.variance = static_cast<double>(m2);
        cell.standard_error =
            static_cast<double>(std::sqrt(std::max(0.0L, m4 - m2 * m2) / n));
        return cell;
    }
};

Table1Row analytic_row(const Table1Options& options) {
    Table1Row row;
    row.ticks = ProcessConfig::kContinuousTicks;
    diagram::BuildOptions build;
    build.grid = options.grid;
    for (double kappa : {0.0, 1.0}) {
        const auto gk = diagram::build_garman_klass(2.0, kappa, build);
        const auto gk_report = diagram::moments(gk, 0.0);
        Table1Cell gk_cell;
        gk_cell.variance = gk_report.variance;
        gk_cell.mean = gk_report.mean;
        Table1Cell me_cell;
        me_cell.variance = 1.0 / diagram::efficiency_functional(2.0, kappa, 0.0) - 1.0;
        me_cell.mean = 1.0;
        if (kappa == 0.0) {
            row.gk_k0 = gk_cell;
            row.me_k0 = me_cell;
        } else {
            row.gk_k1 = gk_cell;
            row.me_k1 = me_cell;
        }
    }
    return row;
}

}  // namespace

std::vector<Table1Row> table1_benchmark(const Table1Options& options) {
    if (options.evaluation_samples < 2 || options.construction_samples < 10'000)
        throw std::invalid_argument("table1_benchmark: sample budgets too small");
    std::vector<Table1Row> rows;
    for (int K : options.tick_counts) {
        if (K == ProcessConfig::kContinuousTicks) {
            rows.push_back(analytic_row(options));
            continue;
        }
        ProcessConfig config;
        config.ticks = K;
        config.innovation = stochastic::Innovation::gaussian;

        // Construction pass: binned weights for both kappa and both orders,
        // plus the Garman-Klass normalization means, from one walk stream.
        const rng::Stream construct(options.seed, 2 * static_cast<std::uint64_t>(K));
        const std::uint64_t n_tasks =
            parallel::task_count(options.construction_samples, kChunk);
        struct Partial {
            BinnedWeight w2_k0, w4_k0, w2_k1, w4_k1;
            long double gk_k0 = 0, gk_k1 = 0;
        };
        auto make_binned = [&](double kappa, double lambda) {
            BinnedWeight w;
            w.kappa = kappa;
            w.lambda = lambda;
            w.grid = options.grid;
            w.mass = Eigen::ArrayXXd::Zero(options.grid.n_phi, options.grid.n_s);
            w.count = Eigen::ArrayXXd::Zero(options.grid.n_phi, options.grid.n_s);
            return w;
        };
        std::vector<Partial> partials(n_tasks);
        parallel::for_each_chunk(
            options.construction_samples, kChunk, options.threads,
            [&](std::uint64_t task, std::uint64_t begin, std::uint64_t end) {
                Partial p{make_binned(0.0, 2.0), make_binned(0.0, 4.0),
                          make_binned(1.0, 2.0), make_binned(1.0, 4.0)};
                Eigen::ArrayXd values;
                for (std::uint64_t m = begin; m < end; ++m) {
                    stochastic::simulate_walk(config, construct, m, values);
                    const auto s0 = stochastic::ohlc_of_walk(values, 0.0);
                    const auto s1 = stochastic::ohlc_of_walk(values, 1.0);
                    p.w2_k0.accumulate(s0);
                    p.w4_k0.accumulate(s0);
                    p.w2_k1.accumulate(s1);
                    p.w4_k1.accumulate(s1);
                    p.gk_k0 += estimators::classic_gk(s0);
                    p.gk_k1 += estimators::classic_gk(s1);
                }
                partials[task] = std::move(p);
            });
        Partial total{make_binned(0.0, 2.0), make_binned(0.0, 4.0), make_binned(1.0, 2.0),
                      make_binned(1.0, 4.0)};
        for (auto& p : partials) {
            total.w2_k0.mass += p.w2_k0.mass;
            total.w2_k0.count += p.w2_k0.count;
            total.w4_k0.mass += p.w4_k0.mass;
            total.w4_k0.count += p.w4_k0.count;
            total.w2_k1.mass += p.w2_k1.mass;
            total.w2_k1.count += p.w2_k1.count;
            total.w4_k1.mass += p.w4_k1.mass;
            total.w4_k1.count += p.w4_k1.count;
            total.gk_k0 += p.gk_k0;
            total.gk_k1 += p.gk_k1;
        }
        total.w2_k0.finalize(options.construction_samples);
        total.w4_k0.finalize(options.construction_samples);
        total.w2_k1.finalize(options.construction_samples);
        total.w4_k1.finalize(options.construction_samples);
        const double gk_norm_k0 =
            static_cast<double>(total.gk_k0) / options.construction_samples;
        const double gk_norm_k1 =
            static_cast<double>(total.gk_k1) / options.construction_samples;

        const auto me_k0 = synthesize_diagram(total.w2_k0, total.w4_k0);
        const auto me_k1 = synthesize_diagram(total.w2_k1, total.w4_k1);

        // Evaluation pass on a disjoint stream.
        const rng::Stream evaluate(options.seed, 2 * static_cast<std::uint64_t>(K) + 1);
        const std::uint64_t n_eval_tasks =
            parallel::task_count(options.evaluation_samples, kChunk);
        struct EvalPartial {
            MomentAccumulator gk0, me0, gk1, me1;
        };
        std::vector<EvalPartial> eval_partials(n_eval_tasks);
        parallel::for_each_chunk(
            options.evaluation_samples, kChunk, options.threads,
            [&](std::uint64_t task, std::uint64_t begin, std::uint64_t end) {
                EvalPartial p;
                Eigen::ArrayXd values;
                for (std::uint64_t m = begin; m < end; ++m) {
                    stochastic::simulate_walk(config, evaluate, m, values);
                    const auto s0 = stochastic::ohlc_of_walk(values, 0.0);
                    const auto s1 = stochastic::ohlc_of_walk(values, 1.0);
                    p.gk0.add(estimators::classic_gk(s0) / gk_norm_k0);
                    p.gk1.add(estimators::classic_gk(s1) / gk_norm_k1);
                    const auto p0 = diagram::to_spherical(s0);
                    const auto p1 = diagram::to_spherical(s1);
                    p.me0.add(p0.r * p0.r * me_k0.value(p0.theta, p0.phi));
                    p.me1.add(p1.r * p1.r * me_k1.value(p1.theta, p1.phi));
                }
                eval_partials[task] = p;
            });
        EvalPartial eval;
        for (auto& p : eval_partials) {
            eval.gk0.merge(p.gk0);
            eval.me0.merge(p.me0);
            eval.gk1.merge(p.gk1);
            eval.me1.merge(p.me1);
        }
        Table1Row row;
        row.ticks = K;
        row.gk_k0 = eval.gk0.cell();
        row.me_k0 = eval.me0.cell();
        row.gk_k1 = eval.gk1.cell();
        row.me_k1 = eval.me1.cell();
        rows.push_back(row);
    }
    return rows;
}

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows) {
    char buf[256];
    out << "K,var_gk_k0,var_me_k0,var_gk_k1,var_me_k1\n";
    for (const auto& row : rows) {
        if (row.ticks == ProcessConfig::kContinuousTicks)
            out << "inf";
        else
            out << row.ticks;
        std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g,%.17g", row.gk_k0.variance,
                      row.me_k0.variance, row.gk_k1.variance, row.me_k1.variance);
        out << buf << "\n";
    }
}

}  // namespace bridgevol::empirical
