#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace buoybench {

// Counter-based generator: output i of a stream is splitmix64(seed ^ golden*i).
// Chosen over std::mt19937 so that streams are cheap to derive, fully specified
// in the docs, and byte-identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), counter_(0) {}

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + 0x9E3779B97F4A7C15ULL * ++counter_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0. Plain modulo; the bias at
    /// 64 bits is negligible and the reduction is part of the spec.
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller (one value per call, no caching).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Beta(k, k) for integer k, sampled as the k-th order statistic of
    /// 2k-1 uniforms. Exact and branch-free across platforms.
    double beta_symmetric(int k) {
        std::vector<double> u(2 * static_cast<std::size_t>(k) - 1);
        for (double& v : u) v = uniform();
        std::nth_element(u.begin(), u.begin() + (k - 1), u.end());
        return u[static_cast<std::size_t>(k) - 1];
    }

    /// Fisher-Yates; uses below() so the permutation is reproducible.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Independent stream keyed by (this stream's seed, index).
    Rng derive(std::uint64_t index) const {
        std::uint64_t z = seed_ ^ (0xD1342543DE82EF95ULL * (index + 1));
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return Rng(z ^ (z >> 31));
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

}  // namespace buoybench
