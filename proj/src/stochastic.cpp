#include "bridgevol/stochastic.hpp"

#include <cmath>
#include <stdexcept>

#include "bridgevol/parallel.hpp"

namespace bridgevol::stochastic {

void ProcessConfig::validate() const {
    if (ticks != kContinuousTicks && ticks < 1)
        throw std::invalid_argument("ProcessConfig: ticks must be >= 1 or the continuous sentinel");
    if (!std::isfinite(gamma) || !std::isfinite(kappa))
        throw std::invalid_argument("ProcessConfig: gamma and kappa must be finite");
    if (innovation == Innovation::custom) {
        if (!custom_icdf)
            throw std::invalid_argument("ProcessConfig: custom innovation requires an inverse CDF");
        const int n = 100000;
        long double mean = 0.0L, second = 0.0L;
        for (int i = 0; i < n; ++i) {
            const double u = (i + 0.5) / n;
            const double x = custom_icdf(u);
            mean += x;
            second += static_cast<long double>(x) * x;
        }
        mean /= n;
        second /= n;
        const double var = static_cast<double>(second - mean * mean);
        if (std::fabs(static_cast<double>(mean)) > 1e-2 || std::fabs(var - 1.0) > 1e-2)
            throw std::invalid_argument(
                "ProcessConfig: custom innovation must have zero mean and unit variance");
    }
}

void PathSample::validate() const {
    if (times.size() < 2 || times.size() != values.size())
        throw std::invalid_argument("PathSample: need matching grids with >= 2 points");
    if (times[0] != 0.0 || times[times.size() - 1] != 1.0)
        throw std::invalid_argument("PathSample: times must span [0,1]");
    if (values[0] != 0.0)
        throw std::invalid_argument("PathSample: values[0] must be 0");
    for (Eigen::Index k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw std::invalid_argument("PathSample: times must be strictly increasing");
}

namespace {

double draw_innovation(const ProcessConfig& config, rng::ItemCursor& cursor) {
    switch (config.innovation) {
        case Innovation::gaussian: return cursor.gaussian();
        case Innovation::rademacher: return cursor.rademacher();
        case Innovation::custom: return config.custom_icdf(cursor.uniform());
    }
    return 0.0;
}

}  // namespace

void simulate_walk(const ProcessConfig& config, const rng::Stream& stream,
                   std::uint64_t path_index, Eigen::ArrayXd& values) {
    const int K = config.effective_ticks();
    values.resize(K + 1);
    values[0] = 0.0;
    const double drift_step = config.gamma / K;
    const double vol_step = 1.0 / std::sqrt(static_cast<double>(K));
    rng::ItemCursor cursor(stream, path_index);
    double x = 0.0;
    for (int k = 1; k <= K; ++k) {
        x += drift_step + vol_step * draw_innovation(config, cursor);
        values[k] = x;
    }
}

OhlcSample ohlc_of_walk(const Eigen::ArrayXd& values, double kappa) {
    const Eigen::Index K = values.size() - 1;
    const double close = values[K];
    double hi = 0.0, lo = 0.0;
    const double slope = kappa * close / static_cast<double>(K);
    for (Eigen::Index k = 1; k <= K; ++k) {
        const double y = values[k] - slope * static_cast<double>(k);
        if (y > hi) hi = y;
        if (y < lo) lo = y;
    }
    return OhlcSample{hi, lo, close, kappa};
}

PathSample simulate_path(const ProcessConfig& config, std::uint64_t seed,
                         std::uint64_t path_index) {
    config.validate();
    const int K = config.effective_ticks();
    PathSample path;
    path.times = Eigen::ArrayXd::LinSpaced(K + 1, 0.0, 1.0);
    simulate_walk(config, rng::Stream(seed, 0), path_index, path.values);
    return path;
}

PathSample bridge_transform(const PathSample& path, double kappa) {
    path.validate();
    PathSample bridge;
    bridge.times = path.times;
    const double close = path.values[path.values.size() - 1];
    bridge.values = path.values - kappa * close * path.times;
    return bridge;
}

OhlcSample extract_ohlc(const PathSample& path, double kappa) {
    path.validate();
    const double close = path.values[path.values.size() - 1];
    double hi = 0.0, lo = 0.0;
    for (Eigen::Index k = 0; k < path.times.size(); ++k) {
        const double y = path.values[k] - kappa * path.times[k] * close;
        if (y > hi) hi = y;
        if (y < lo) lo = y;
    }
    return OhlcSample{hi, lo, close, kappa};
}

OhlcSample sample_ohlc(const ProcessConfig& config, const rng::Stream& stream,
                       std::uint64_t path_index) {
    Eigen::ArrayXd values;
    simulate_walk(config, stream, path_index, values);
    return ohlc_of_walk(values, config.kappa);
}

std::vector<OhlcSample> monte_carlo_ohlc(const ProcessConfig& config, std::uint64_t n,
                                         std::uint64_t seed, int threads) {
    config.validate();
    if (n < 1) throw std::invalid_argument("monte_carlo_ohlc: n must be >= 1");
    std::vector<OhlcSample> out(n);
    const rng::Stream stream(seed, 0);
    parallel::for_each_chunk(n, 8192, threads,
                             [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
                                 Eigen::ArrayXd values;
                                 for (std::uint64_t i = begin; i < end; ++i) {
                                     simulate_walk(config, stream, i, values);
                                     out[i] = ohlc_of_walk(values, config.kappa);
                                 }
                             });
    return out;
}

}  // namespace bridgevol::stochastic
