#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace rar {

/// splitmix64 step. Used for seed derivation; never as the main generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Mixes (master seed, stream tag, index) into an independent stream seed.
/// Streams derived from the same master with different tags/indices are
/// decorrelated, so adding a consumer does not perturb the others.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index = 0) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s ^= stream * 0xD1342543DE82EF95ULL;
    std::uint64_t b = splitmix64(s);
    s ^= index * 0xAF251AF3B0F025B5ULL;
    std::uint64_t c = splitmix64(s);
    return a ^ (b + 0x9E3779B97F4A7C15ULL) ^ (c << 1);
}

/// Seeded generator with samplers built on uniform01() only, so a given seed
/// reproduces the same sequence on any platform regardless of the standard
/// library's distribution internals. Every sampler consumes a fixed number of
/// raw draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + uniform01() * (b - a); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Box-Muller; always consumes exactly two raw draws.
    double normal(double mean, double stddev) {
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(6.283185307179586476925287 * u2);
    }

    double exponential_mean(double mean) {
        return -mean * std::log(1.0 - uniform01());
    }

    /// Index drawn proportionally to nonnegative weights[0..k). The walk order
    /// is part of the reproducibility contract.
    int discrete(const double* weights, int k, double total) {
        if (!(total > 0.0))
            throw std::runtime_error("discrete draw requested with nonpositive total mass");
        double u = uniform01() * total;
        double cum = 0.0;
        for (int i = 0; i < k; ++i) {
            cum += weights[i];
            if (u < cum) return i;
        }
        for (int i = k - 1; i >= 0; --i)
            if (weights[i] > 0.0) return i;
        throw std::runtime_error("discrete draw found no positive weight");
    }

private:
    std::mt19937_64 gen_;
};

/// The named per-trial streams. Assignment draws, response draws and delay
/// draws never share a generator, so the same patient outcomes are replayed
/// across designs under a common master seed.
struct TrialStreams {
    Rng assignment;
    Rng response;
    Rng delay;

    static TrialStreams make(std::uint64_t master, std::uint64_t replication = 0) {
        return TrialStreams{Rng(derive_seed(master, 0x61u, replication)),
                            Rng(derive_seed(master, 0x72u, replication)),
                            Rng(derive_seed(master, 0x64u, replication))};
    }
};

}  // namespace rar
