#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "boa/errors.hpp"

namespace boa {

// splitmix64 step, used to derive independent seeds from a master seed.
// Standard finalizer constants; stateless and platform-independent.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4a24bf35213aaULL;
    return z ^ (z >> 31);
}

// Deterministic random stream. The engine is std::mt19937_64 (bit-exact
// across platforms by the standard); every derived draw (uniform, normal,
// gamma) is computed here rather than through std:: distributions, whose
// algorithms are implementation-defined. Identical seed + identical call
// sequence gives identical outputs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform double in (0, 1].
    double uniform_open() { return 1.0 - uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection to remove modulo bias.
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

    // Standard normal via Box-Muller. Consumes exactly two uniforms per
    // draw (no cached second value) so the stream position stays simple.
    double normal() {
        const double u1 = uniform_open();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    // ln of a Gamma(shape, 1) variate. Marsaglia-Tsang for shape >= 1,
    // log-space shape boost below 1 so tiny shapes never underflow.
    double log_gamma_variate(double shape) {
        if (!(shape > 0.0)) throw DomainError("gamma shape must be > 0");
        if (shape < 1.0) {
            const double u = uniform_open();
            return log_gamma_variate(shape + 1.0) + std::log(u) / shape;
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            const double u = uniform_open();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
                return std::log(d) + std::log(v);
            }
        }
    }

    // Gamma(shape, 1) variate in linear scale.
    double gamma_variate(double shape) { return std::exp(log_gamma_variate(shape)); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace boa
