#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "edo/core.hpp"
#include "edo/rng.hpp"

namespace edo {

enum class MutationKind { bf, pbf, htbf, edo_bbf1, edo_bbf2 };

inline std::string_view to_string(MutationKind kind) {
    switch (kind) {
        case MutationKind::bf: return "bf";
        case MutationKind::pbf: return "pbf";
        case MutationKind::htbf: return "htbf";
        case MutationKind::edo_bbf1: return "edo-bbf1";
        case MutationKind::edo_bbf2: return "edo-bbf2";
    }
    return "?";
}

inline MutationKind parse_mutation_kind(std::string_view name) {
    if (name == "bf") return MutationKind::bf;
    if (name == "pbf") return MutationKind::pbf;
    if (name == "htbf") return MutationKind::htbf;
    if (name == "edo-bbf1") return MutationKind::edo_bbf1;
    if (name == "edo-bbf2") return MutationKind::edo_bbf2;
    throw ParameterError("unknown mutation operator '" + std::string(name) + "'");
}

inline constexpr MutationKind kAllMutations[] = {MutationKind::bf, MutationKind::pbf, MutationKind::htbf,
                                                 MutationKind::edo_bbf1, MutationKind::edo_bbf2};

inline constexpr double kDefaultBeta = 1.5;

/// Truncated power law on {1..half_n} with P(theta) proportional to theta^-beta.
class PowerLaw {
public:
    PowerLaw(std::int64_t half_n, double beta) : beta_(beta) {
        if (half_n < 1) throw ContractError("power law support must be non-empty");
        if (!(beta > 1.0)) throw ParameterError("power-law exponent beta must exceed 1");
        cdf_.resize(static_cast<std::size_t>(half_n));
        double c = 0.0;
        for (std::int64_t i = 1; i <= half_n; ++i) {
            c += std::pow(static_cast<double>(i), -beta);
            cdf_[static_cast<std::size_t>(i - 1)] = c;
        }
        norm_ = c;
    }

    std::int64_t half_n() const { return static_cast<std::int64_t>(cdf_.size()); }
    double beta() const { return beta_; }
    double normalizer() const { return norm_; }

    double pmf(std::int64_t theta) const {
        if (theta < 1 || theta > half_n()) return 0.0;
        return std::pow(static_cast<double>(theta), -beta_) / norm_;
    }

    std::int64_t sample(Rng& rng) const {
        const double u = rng.uniform01() * norm_;
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.end()) return half_n();
        return static_cast<std::int64_t>(it - cdf_.begin()) + 1;
    }

private:
    std::vector<double> cdf_;
    double norm_ = 0.0;
    double beta_;
};

inline std::int64_t sample_power_law(std::int64_t half_n, double beta, Rng& rng) {
    return PowerLaw(half_n, beta).sample(rng);
}

namespace detail {
inline void flip_each(Packing& x, double p, Rng& rng) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (rng.bernoulli(p)) x.flip(i);
}

inline void flip_k_of(Packing& x, std::vector<std::size_t> pool, std::size_t k, Rng& rng) {
    for (auto i : rng.sample_without_replacement(pool, k)) x.flip(i);
}

inline std::vector<std::size_t> positions_with(const Packing& x, bool value) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] == value) out.push_back(i);
    return out;
}
}  // namespace detail

/// Standard bit-flip: each bit flips independently with probability 1/n.
inline Packing mutate_bf(const Packing& x, Rng& rng) {
    if (x.size() == 0) throw ContractError("cannot mutate an empty packing");
    Packing y = x;
    detail::flip_each(y, 1.0 / static_cast<double>(x.size()), rng);
    return y;
}

/// Poisson bit-flip: flips min(1 + Pois(1), n) distinct uniform positions.
inline Packing mutate_pbf(const Packing& x, Rng& rng) {
    const std::size_t n = x.size();
    if (n == 0) throw ContractError("cannot mutate an empty packing");
    const auto k = std::min<std::size_t>(1 + static_cast<std::size_t>(rng.poisson(1.0)), n);
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    Packing y = x;
    detail::flip_k_of(y, std::move(pool), k, rng);
    return y;
}

/// Heavy-tailed bit-flip: theta ~ power law on {1..n/2}, then each bit flips
/// with probability theta/n.
inline Packing mutate_htbf(const Packing& x, const PowerLaw& law, Rng& rng) {
    const std::size_t n = x.size();
    if (n < 2) throw ContractError("heavy-tailed mutation needs at least two bits");
    const std::int64_t theta = law.sample(rng);
    Packing y = x;
    detail::flip_each(y, static_cast<double>(theta) / static_cast<double>(n), rng);
    return y;
}

inline Packing mutate_htbf(const Packing& x, double beta, Rng& rng) {
    return mutate_htbf(x, PowerLaw(static_cast<std::int64_t>(x.size() / 2), beta), rng);
}

/// Flip probability of item i under the frequency-biased operator, clamped to [0,1].
/// Rare inactive items get (mu - h)/(2n), common active items get h/(2n),
/// every other case zero.
inline double bbf1_probability(bool active, std::int64_t h, std::int64_t mu, std::size_t n) {
    double p = 0.0;
    if (!active && 2 * h <= mu)
        p = static_cast<double>(mu - h) / (2.0 * static_cast<double>(n));
    else if (active && 2 * h > mu)
        p = static_cast<double>(h) / (2.0 * static_cast<double>(n));
    return std::clamp(p, 0.0, 1.0);
}

inline Packing mutate_bbf1(const Packing& x, const std::vector<std::int64_t>& h, std::int64_t mu, Rng& rng) {
    const std::size_t n = x.size();
    if (h.size() != n) throw ContractError("frequency vector length differs from packing");
    Packing y = x;
    for (std::size_t i = 0; i < n; ++i) {
        if (h[i] < 0 || h[i] > mu) throw ContractError("frequency outside [0, mu]");
        if (rng.bernoulli(bbf1_probability(x[i], h[i], mu, n))) y.flip(i);
    }
    return y;
}

/// Balanced bit-flip: independent budgets k_a, k_b ~ 1 + Pois(1) for the
/// inactive and the active positions respectively.
inline Packing mutate_bbf2(const Packing& x, Rng& rng) {
    if (x.size() == 0) throw ContractError("cannot mutate an empty packing");
    const auto k_zero = 1 + static_cast<std::size_t>(rng.poisson(1.0));
    const auto k_one = 1 + static_cast<std::size_t>(rng.poisson(1.0));
    auto zeros = detail::positions_with(x, false);
    auto ones = detail::positions_with(x, true);
    Packing y = x;
    detail::flip_k_of(y, std::move(zeros), k_zero, rng);
    detail::flip_k_of(y, std::move(ones), k_one, rng);
    return y;
}

/// A configured mutation operator.
class MutationOp {
public:
    explicit MutationOp(MutationKind kind = MutationKind::bf, double beta = kDefaultBeta)
        : kind_(kind), beta_(beta) {
        if (kind == MutationKind::htbf && !(beta > 1.0))
            throw ParameterError("power-law exponent beta must exceed 1");
    }

    MutationKind kind() const { return kind_; }
    double beta() const { return beta_; }

    /// Offspring of x given the current population frequencies h over mu members.
    Packing apply(const Packing& x, const std::vector<std::int64_t>& h, std::int64_t mu, Rng& rng) const {
        switch (kind_) {
            case MutationKind::bf: return mutate_bf(x, rng);
            case MutationKind::pbf: return mutate_pbf(x, rng);
            case MutationKind::htbf: return mutate_htbf(x, beta_, rng);
            case MutationKind::edo_bbf1: return mutate_bbf1(x, h, mu, rng);
            case MutationKind::edo_bbf2: return mutate_bbf2(x, rng);
        }
        return x;
    }

private:
    MutationKind kind_;
    double beta_;
};

/// Item indices sorted by ascending frequency, ties by ascending index.
/// Counting sort over h in [0, max h].
inline std::vector<std::size_t> frequency_order(const std::vector<std::int64_t>& h) {
    std::int64_t top = 0;
    for (auto c : h) {
        if (c < 0) throw ContractError("negative item frequency");
        top = std::max(top, c);
    }
    std::vector<std::size_t> start(static_cast<std::size_t>(top) + 2, 0);
    for (auto c : h) ++start[static_cast<std::size_t>(c) + 1];
    for (std::size_t b = 1; b < start.size(); ++b) start[b] += start[b - 1];
    std::vector<std::size_t> order(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) order[start[static_cast<std::size_t>(h[i])]++] = i;
    return order;
}

namespace detail {
// Activates inactive items in ascending-frequency order until v_min is reached.
inline void fill_to_quality(Packing& x, const Instance& inst, std::int64_t v_min,
                            const std::vector<std::size_t>& order) {
    std::int64_t v = total_value(inst, x);
    for (auto it = order.begin(); it != order.end() && v < v_min; ++it) {
        if (!x[*it]) {
            x.set(*it, true);
            v += inst.profit(*it);
        }
    }
}
}  // namespace detail

/// Frequency-guided repair. Overweight packings drop active items, most
/// frequent first; packings below v_min then gain inactive items, least
/// frequent first. A single pass of each phase; the result may stay infeasible.
/// Within one frequency the lower item index is visited first in both phases.
inline Packing repair(const Packing& x, const Instance& inst, std::int64_t v_min, std::int64_t W,
                      const std::vector<std::int64_t>& h) {
    check_length(inst, x);
    if (h.size() != x.size()) throw ContractError("frequency vector length differs from packing");
    Packing y = x;
    std::int64_t w = total_weight(inst, y);
    const bool overweight = w > W;
    const bool underquality = total_value(inst, y) < v_min;
    if (!overweight && !underquality) return y;

    const auto order = frequency_order(h);
    if (overweight) {
        // walk buckets from the highest frequency down, each bucket in index order
        std::size_t hi = order.size();
        while (hi > 0 && w > W) {
            std::size_t lo = hi;
            const auto bucket = h[order[hi - 1]];
            while (lo > 0 && h[order[lo - 1]] == bucket) --lo;
            for (std::size_t k = lo; k < hi && w > W; ++k) {
                const auto i = order[k];
                if (y[i]) {
                    y.set(i, false);
                    w -= inst.weight(i);
                }
            }
            hi = lo;
        }
    }
    detail::fill_to_quality(y, inst, v_min, order);
    return y;
}

/// Keeps the items common to both parents, then fills up to v_min like the
/// second repair phase.
inline Packing crossover(const Packing& a, const Packing& b, const Instance& inst, std::int64_t v_min,
                         const std::vector<std::int64_t>& h) {
    if (a.size() != b.size()) throw ContractError("parents differ in length");
    check_length(inst, a);
    if (h.size() != a.size()) throw ContractError("frequency vector length differs from packing");
    Packing child(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) child.set(i, a[i] && b[i]);
    detail::fill_to_quality(child, inst, v_min, frequency_order(h));
    return child;
}

}  // namespace edo
