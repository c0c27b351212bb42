#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace edo {

/// Random stream used everywhere in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The distributions below are written out by hand because the
/// standard library distributions are implementation-defined; this keeps runs
/// bit-reproducible across compilers and platforms at equal seed.
class Rng {
public:
    using engine_type = std::mt19937_64;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // rejection sampling on the top of the range
        const std::uint64_t limit = engine_type::max() - engine_type::max() % bound;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % bound;
    }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Poisson(lambda) by sequential inversion of the cdf.
    std::int64_t poisson(double lambda) {
        const double u = uniform01();
        std::int64_t k = 0;
        double p = std::exp(-lambda);
        double cdf = p;
        while (u >= cdf) {
            ++k;
            p *= lambda / static_cast<double>(k);
            const double next = cdf + p;
            if (next == cdf) break;  // tail underflow
            cdf = next;
        }
        return k;
    }

    /// Draws `k` distinct values from `pool` (partial Fisher-Yates, pool is reordered).
    template <typename T>
    std::vector<T> sample_without_replacement(std::vector<T>& pool, std::size_t k) {
        std::vector<T> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k && i < pool.size(); ++i) {
            const std::size_t j = i + static_cast<std::size_t>(below(pool.size() - i));
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

private:
    engine_type engine_;
};

/// SplitMix64 finalizer, used to derive independent seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for a labelled sub-stream of `master`. Stable across platforms.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(master ^ splitmix64(h));
}

}  // namespace edo
