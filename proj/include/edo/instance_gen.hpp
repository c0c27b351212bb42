#pragma once

#include <cstdint>
#include <vector>

#include "edo/core.hpp"
#include "edo/rng.hpp"

namespace edo {

struct GenSpec {
    InstanceKind kind = InstanceKind::uncorr;
    std::int64_t n = 100;
    std::int64_t range = 10'000;
    std::uint64_t seed = 0;
};

/// Benchmark instance of the requested class. A pure function of the spec.
///
///   scorr     w ~ U{1..R},            v = w + R/10
///   invscorr  v ~ U{1..R},            w = v + R/10
///   uncorr    w, v ~ U{1..R} independently
///   usw       w ~ U{100000..100100},  v ~ U{1..1000}
///
/// Per item the weight draw precedes the profit draw.
inline Instance generate(const GenSpec& spec) {
    if (spec.n < 1) throw ParameterError("n must be positive");
    if (spec.range < 10) throw ParameterError("R must be at least 10");
    Rng rng(spec.seed);
    const auto n = static_cast<std::size_t>(spec.n);
    const std::int64_t R = spec.range;
    std::vector<std::int64_t> w(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (spec.kind) {
            case InstanceKind::scorr:
                w[i] = rng.between(1, R);
                v[i] = w[i] + R / 10;
                break;
            case InstanceKind::invscorr:
                v[i] = rng.between(1, R);
                w[i] = v[i] + R / 10;
                break;
            case InstanceKind::uncorr:
                w[i] = rng.between(1, R);
                v[i] = rng.between(1, R);
                break;
            case InstanceKind::usw:
                w[i] = rng.between(100'000, 100'100);
                v[i] = rng.between(1, 1'000);
                break;
        }
    }
    return Instance(std::move(w), std::move(v), spec.kind, R, spec.seed);
}

/// Knapsack capacity floor(D * sum(w) / 11) for capacity class D in [1, 10].
inline std::int64_t capacity_for(const Instance& inst, std::int64_t D) {
    if (D < 1 || D > 10) throw ParameterError("capacity class D must lie in [1,10]");
    return D * inst.weight_sum() / 11;
}

}  // namespace edo
