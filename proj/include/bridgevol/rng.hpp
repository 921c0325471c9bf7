#pragma once

#include <array>
#include <cstdint>

namespace bridgevol::rng {

// Philox4x32-10 counter-based generator. Every draw is addressed by
// (seed, stream, item, draw-index), so parallel workers produce identical
// output for a given partition of item indices regardless of thread count.
struct Philox4x32 {
    std::uint32_t key0 = 0, key1 = 0;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::uint32_t k0, std::uint32_t k1);
};

// Identifies an independent substream: `stream` separates purposes
// (construction vs evaluation, noise vs paths); `item` is typically a path
// index. The key is derived from (seed, stream) by splitmix64.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream_id);

    // i-th 64-bit word of the item's substream.
    std::uint64_t bits64(std::uint64_t item, std::uint64_t i) const;

    // i-th uniform on (0,1), 53-bit resolution, never exactly 0 or 1.
    double uniform(std::uint64_t item, std::uint64_t i) const;

    // i-th standard normal deviate (inverse-CDF of the uniform draw).
    double gaussian(std::uint64_t item, std::uint64_t i) const;

    // i-th Rademacher deviate (+1/-1 with equal probability).
    double rademacher(std::uint64_t item, std::uint64_t i) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    std::uint64_t seed_, stream_id_;
    std::uint32_t key0_, key1_;
};

// Sequential cursor over one item's substream; caches the current Philox
// block so walks pay one block per two 64-bit draws.
class ItemCursor {
public:
    ItemCursor(const Stream& s, std::uint64_t item);

    double uniform();
    double gaussian();
    double rademacher();

private:
    std::uint64_t next_bits();

    const Stream* stream_;
    std::uint64_t item_;
    std::uint64_t word_index_ = 0;
};

// High-accuracy inverse of the standard normal CDF (Wichura's PPND16
// algorithm, AS 241). Max absolute error about 1e-15 over (0,1).
double normal_quantile(double p);

// The generator identifier echoed into output sidecars.
const char* algorithm_name();

}  // namespace bridgevol::rng
