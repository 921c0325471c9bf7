#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "bridgevol/rng.hpp"

namespace bridgevol::stochastic {

enum class Innovation { gaussian, rademacher, custom };

// Configuration of the normalized log-price process on the unit interval:
// X(t) = gamma*t + W(t) in the continuous limit, or the K-step normalized
// random walk with increments gamma/K + eps_k/sqrt(K).
struct ProcessConfig {
    static constexpr int kContinuousTicks = -1;
    // Grid used when ticks is the continuous-limit sentinel. Extremes are
    // taken over grid points only, so a residual O(1/sqrt(K)) discretization
    // bias remains; tests cancel it by comparing two resolutions.
    static constexpr int kContinuousResolution = 4096;

    double gamma = 0.0;
    double kappa = 0.0;
    int ticks = kContinuousTicks;
    Innovation innovation = Innovation::gaussian;
    // Inverse CDF of the innovation law; consulted only when innovation is
    // custom. Must have zero mean and unit variance.
    std::function<double(double)> custom_icdf;

    int effective_ticks() const {
        return ticks == kContinuousTicks ? kContinuousResolution : ticks;
    }
    // Throws std::invalid_argument on bad parameters. For custom innovations
    // the icdf's first two moments are checked here (tolerance 1e-2 on a
    // 10^5-point quantile grid), not on every draw.
    void validate() const;
};

struct PathSample {
    Eigen::ArrayXd times;   // ascending grid on [0,1], times[0]=0, last=1
    Eigen::ArrayXd values;  // process values, values[0]=0

    void validate() const;
};

// High/low of the incomplete bridge over one interval plus the close of the
// underlying process, in canonical (unit-variance) scale.
struct OhlcSample {
    double h = 0.0;      // bridge high, >= 0
    double l = 0.0;      // bridge low, <= 0
    double c = 0.0;      // close of the underlying process
    double kappa = 0.0;  // bridge coefficient used to form the sample

    // Support constraint l <= (1-kappa)c <= h, with absolute slack tol.
    bool in_support(double tol = 0.0) const {
        const double w = (1.0 - kappa) * c;
        return h >= -tol && l <= tol && l - tol <= w && w <= h + tol;
    }
};

// One realization of the normalized walk; deterministic in (seed, path_index).
PathSample simulate_path(const ProcessConfig& config, std::uint64_t seed,
                         std::uint64_t path_index = 0);

// Y(t) = X(t) - kappa * t * X(1) on the path's own grid.
PathSample bridge_transform(const PathSample& path, double kappa);

// Grid extremes of the bridge plus the close of the underlying path.
OhlcSample extract_ohlc(const PathSample& path, double kappa);

// n independent OHLC samples; reproducible in (seed) and independent of the
// thread count (paths are addressed by index, not by draw order).
std::vector<OhlcSample> monte_carlo_ohlc(const ProcessConfig& config, std::uint64_t n,
                                         std::uint64_t seed, int threads = 1);

// Partitionable primitives for parallel drivers -----------------------------

// Fills `values` (resized to K+1) with one walk realization.
void simulate_walk(const ProcessConfig& config, const rng::Stream& stream,
                   std::uint64_t path_index, Eigen::ArrayXd& values);

// OHLC of the kappa-bridge of an already simulated walk.
OhlcSample ohlc_of_walk(const Eigen::ArrayXd& values, double kappa);

// Convenience: one OHLC sample straight from the stream.
OhlcSample sample_ohlc(const ProcessConfig& config, const rng::Stream& stream,
                       std::uint64_t path_index);

}  // namespace bridgevol::stochastic
