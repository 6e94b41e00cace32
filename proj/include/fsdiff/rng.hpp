#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace fsdiff {

// Philox4x32-10 counter-based generator.  A stream is addressed by
// (key, stream): the 64-bit key seeds the round keys and the 64-bit stream id
// occupies the upper counter words, so streams derived from (base_seed, i)
// are independent and reproducible under any execution order.
class Philox4x32 {
public:
    using result_type = std::uint64_t;

    Philox4x32(std::uint64_t key, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
          counter_{0u, 0u, static_cast<std::uint32_t>(stream),
                   static_cast<std::uint32_t>(stream >> 32)} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (pos_ == 0) refill();
        const std::size_t i = 2 * static_cast<std::size_t>(--pos_);
        return static_cast<std::uint64_t>(block_[i]) | (static_cast<std::uint64_t>(block_[i + 1]) << 32);
    }

private:
    static void round(std::array<std::uint32_t, 4>& ctr, const std::array<std::uint32_t, 2>& key) {
        const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
               static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
               static_cast<std::uint32_t>(p0)};
    }

    void refill() {
        std::array<std::uint32_t, 4> ctr = counter_;
        std::array<std::uint32_t, 2> key = key_;
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            round(ctr, key);
        }
        block_ = ctr;
        pos_ = 2;
        if (++counter_[0] == 0) ++counter_[1];
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 0;
};

// Sampling layer over a Philox stream.  The samplers are hand-rolled so that
// streams are bit-reproducible across standard libraries.
class RandomStream {
public:
    RandomStream(std::uint64_t base_seed, std::uint64_t stream_index)
        : engine_(base_seed, stream_index) {}

    // uniform on (0, 1), never 0 or 1
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // standard normal via the Marsaglia polar method, one value cached
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * factor;
        has_cached_ = true;
        return u * factor;
    }

    // Gamma(shape, 1) via Marsaglia-Tsang; shapes < 1 boosted through shape+1.
    double gamma(double shape) {
        if (shape < 1.0) return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    Philox4x32 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace fsdiff
