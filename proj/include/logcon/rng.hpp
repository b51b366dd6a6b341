#pragma once

// Counter-based RNG streams.  Every consumer derives an independent stream
// from (seed, tag...) so any parallel schedule reproduces the same batch.

#include <cmath>
#include <cstdint>

namespace logcon {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s) : state(s) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in the open interval (0,1); never returns 0 or 1
    double uniform() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Box-Muller, no rejection, fixed consumption of two uniforms
    double gaussian() {
        double u1 = uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // P(W = k) = (1-q) q^k, k >= 0, via inversion
    long geometric(double q) {
        double u = uniform();
        if (q <= 0.0) return 0;
        return static_cast<long>(std::floor(std::log(u) / std::log(q)));
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    // Marsaglia-Tsang; shape a >= 1 handled directly, a < 1 by boosting
    double gamma(double a) {
        if (a < 1.0) {
            double u = uniform();
            return gamma(a + 1.0) * std::pow(u, 1.0 / a);
        }
        double d = a - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = gaussian();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // chi-distributed value with k degrees of freedom (sqrt of chi-square)
    double chi(double k) { return std::sqrt(2.0 * gamma(0.5 * k)); }
};

// stream derivation: hash the tag words into the seed
inline SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t tag0,
                                std::uint64_t tag1 = 0, std::uint64_t tag2 = 0) {
    SplitMix64 h(seed);
    std::uint64_t s = h.next();
    s ^= SplitMix64(tag0 + 0x632be59bd9b4e019ULL).next();
    s = (s ^ (s >> 29)) * 0xff51afd7ed558ccdULL;
    s ^= SplitMix64(tag1 + 0x9e3779b97f4a7c15ULL).next();
    s = (s ^ (s >> 32)) * 0xc4ceb9fe1a85ec53ULL;
    s ^= SplitMix64(tag2 + 0x2545f4914f6cdd1dULL).next();
    return SplitMix64(s);
}

} // namespace logcon
