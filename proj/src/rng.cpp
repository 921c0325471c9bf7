#include "bridgevol/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace bridgevol::rng {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& c, std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 4> ctr,
                                               std::uint32_t k0, std::uint32_t k1) {
    for (int r = 0; r < 10; ++r) {
        round_once(ctr, k0, k1);
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return ctr;
}

Stream::Stream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    const std::uint64_t key = splitmix64(seed + splitmix64(stream_id));
    key0_ = static_cast<std::uint32_t>(key);
    key1_ = static_cast<std::uint32_t>(key >> 32);
}

std::uint64_t Stream::bits64(std::uint64_t item, std::uint64_t i) const {
    const std::uint64_t block_index = i >> 1;
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(item),
        static_cast<std::uint32_t>(item >> 32),
        static_cast<std::uint32_t>(block_index),
        static_cast<std::uint32_t>(block_index >> 32)};
    const auto out = Philox4x32::block(ctr, key0_, key1_);
    const int half = static_cast<int>(i & 1u) * 2;
    return (static_cast<std::uint64_t>(out[half + 1]) << 32) | out[half];
}

double Stream::uniform(std::uint64_t item, std::uint64_t i) const {
    const std::uint64_t mantissa = bits64(item, i) >> 11;
    return (static_cast<double>(mantissa) + 0.5) * 0x1.0p-53;
}

double Stream::gaussian(std::uint64_t item, std::uint64_t i) const {
    return normal_quantile(uniform(item, i));
}

double Stream::rademacher(std::uint64_t item, std::uint64_t i) const {
    return (bits64(item, i) & 1u) ? 1.0 : -1.0;
}

ItemCursor::ItemCursor(const Stream& s, std::uint64_t item) : stream_(&s), item_(item) {}

std::uint64_t ItemCursor::next_bits() { return stream_->bits64(item_, word_index_++); }

double ItemCursor::uniform() {
    const std::uint64_t mantissa = next_bits() >> 11;
    return (static_cast<double>(mantissa) + 0.5) * 0x1.0p-53;
}

double ItemCursor::gaussian() { return normal_quantile(uniform()); }

double ItemCursor::rademacher() { return (next_bits() & 1u) ? 1.0 : -1.0; }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile: p must lie strictly in (0,1)");
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            q * (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                      6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                    1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                  1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return num / den;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        value = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        value = num / den;
    }
    return (q < 0.0) ? -value : value;
}

const char* algorithm_name() { return "philox4x32-10/splitmix64-key/ppnd16"; }

}  // namespace bridgevol::rng
