#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bridgevol/diagram.hpp"
#include "bridgevol/stochastic.hpp"

namespace bridgevol::empirical {

// Histogram estimate of the weight field: bin masses approximate
// integrals of g_lambda cos(theta) over (phi, s) cells,
//   g_lambda cos(theta) dtheta dphi ~ (1/M) sum_m R_m^lambda I_bin.
struct BinnedWeight {
    double kappa = 0.0;
    double lambda = 2.0;
    diagram::GridSpec grid{50, 50};
    Eigen::ArrayXXd mass;   // n_phi x n_s, already divided by M
    Eigen::ArrayXXd count;  // hits per bin
    std::uint64_t total = 0;

    void accumulate(const stochastic::OhlcSample& s);  // adds raw R^lambda
    void finalize(std::uint64_t M);                    // divides mass by M
};

struct SynthesisOptions {
    diagram::GridSpec grid{50, 50};
    std::uint64_t samples = 10'000'000;  // M
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    int threads = 1;
};

// One histogram per requested order, accumulated from a single pass of
// M simulated walks. Deterministic in (seed, stream) for any thread count.
std::vector<BinnedWeight> synthesize_weights(const stochastic::ProcessConfig& config,
                                             const std::vector<double>& lambdas,
                                             const SynthesisOptions& options);

BinnedWeight synthesize_weight(const stochastic::ProcessConfig& config, double lambda,
                               const SynthesisOptions& options);

// Synthetic most-efficient diagram psi = (g_lambda / g_2lambda) / E from the
// binned masses. Bins with fewer than 10 hits are noise-dominated; they take
// the nearest usable ratio of their phi row and are counted as filled. More
// than 20% unusable bins is an error (the sample budget was too small).
diagram::Diagram synthesize_diagram(const BinnedWeight& g_lambda,
                                    const BinnedWeight& g_2lambda);

void save_binned_weight(std::ostream& out, const BinnedWeight& weight);

// Table 1 pipeline: variances of the normalized Garman-Klass estimator and
// of the synthetic most-efficient variance estimator at kappa = 0 and 1, per
// tick count K. Synthetic diagrams and Garman-Klass normalizations come from
// a construction stream of M_diagram walks; variances are measured on a
// disjoint evaluation stream of N_eval walks. The continuous-limit sentinel
// row is computed from the analytic weight fields instead of simulation.
struct Table1Options {
    std::vector<int> tick_counts{10, 100, 1000, stochastic::ProcessConfig::kContinuousTicks};
    std::uint64_t construction_samples = 10'000'000;  // M_diagram
    std::uint64_t evaluation_samples = 1'000'000;     // N_eval
    std::uint64_t seed = 1;
    int threads = 1;
    diagram::GridSpec grid{50, 50};
};

struct Table1Cell {
    double variance = 0.0;
    double standard_error = 0.0;  // of the variance estimate; 0 for analytic
    double mean = 0.0;
};

struct Table1Row {
    int ticks = 0;  // kContinuousTicks for the analytic column
    Table1Cell gk_k0, me_k0, gk_k1, me_k1;
};

std::vector<Table1Row> table1_benchmark(const Table1Options& options);

// CSV layout `K,var_gk_k0,var_me_k0,var_gk_k1,var_me_k1` matching the paper's
// row ordering; the sentinel prints as "inf".
void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows);

}  // namespace bridgevol::empirical
