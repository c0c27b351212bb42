#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace edo {

/// A precondition of an operation was violated by the caller.
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

/// A user-supplied parameter is outside its admissible range.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class InstanceKind { scorr, invscorr, uncorr, usw };

inline std::string_view to_string(InstanceKind kind) {
    switch (kind) {
        case InstanceKind::scorr: return "scorr";
        case InstanceKind::invscorr: return "invscorr";
        case InstanceKind::uncorr: return "uncorr";
        case InstanceKind::usw: return "usw";
    }
    return "?";
}

inline InstanceKind parse_instance_kind(std::string_view name) {
    if (name == "scorr") return InstanceKind::scorr;
    if (name == "invscorr") return InstanceKind::invscorr;
    if (name == "uncorr") return InstanceKind::uncorr;
    if (name == "usw") return InstanceKind::usw;
    throw ParameterError("unknown instance kind '" + std::string(name) + "'");
}

/// A 0-1 knapsack instance without capacity; capacity is chosen per experiment.
class Instance {
public:
    Instance(std::vector<std::int64_t> weights, std::vector<std::int64_t> profits,
             InstanceKind kind = InstanceKind::uncorr, std::int64_t range = 0,
             std::uint64_t gen_seed = 0)
        : weights_(std::move(weights)), profits_(std::move(profits)), kind_(kind), range_(range),
          gen_seed_(gen_seed) {
        if (weights_.empty()) throw ContractError("instance needs at least one item");
        if (weights_.size() != profits_.size())
            throw ContractError("weights and profits differ in length");
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            if (weights_[i] < 1 || profits_[i] < 1)
                throw ContractError("item " + std::to_string(i) + " has non-positive weight or profit");
        }
    }

    std::size_t size() const { return weights_.size(); }
    const std::vector<std::int64_t>& weights() const { return weights_; }
    const std::vector<std::int64_t>& profits() const { return profits_; }
    std::int64_t weight(std::size_t i) const { return weights_[i]; }
    std::int64_t profit(std::size_t i) const { return profits_[i]; }
    InstanceKind kind() const { return kind_; }
    std::int64_t range() const { return range_; }
    std::uint64_t gen_seed() const { return gen_seed_; }

    std::int64_t weight_sum() const {
        std::int64_t s = 0;
        for (auto w : weights_) s += w;
        return s;
    }

    std::int64_t profit_sum() const {
        std::int64_t s = 0;
        for (auto v : profits_) s += v;
        return s;
    }

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    std::vector<std::int64_t> weights_;
    std::vector<std::int64_t> profits_;
    InstanceKind kind_;
    std::int64_t range_;
    std::uint64_t gen_seed_;
};

/// Binary inclusion vector over the items of an instance.
class Packing {
public:
    Packing() = default;
    explicit Packing(std::size_t n) : bits_(n, 0) {}
    explicit Packing(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        for (auto& b : bits_) b = b ? 1 : 0;
    }

    /// Parses "0110"-style strings; item 0 is the leftmost character.
    static Packing from_string(std::string_view s) {
        Packing p(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1')
                p.bits_[i] = 1;
            else if (s[i] != '0')
                throw ParameterError("packing string may only contain '0' and '1'");
        }
        return p;
    }

    std::string to_string() const {
        std::string s(bits_.size(), '0');
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i]) s[i] = '1';
        return s;
    }

    std::size_t size() const { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool on) { bits_[i] = on ? 1 : 0; }
    void flip(std::size_t i) { bits_[i] ^= 1; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    std::size_t count() const {
        return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
    }

    friend bool operator==(const Packing&, const Packing&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

inline void check_length(const Instance& inst, const Packing& x) {
    if (x.size() != inst.size())
        throw ContractError("packing length " + std::to_string(x.size()) +
                            " does not match instance size " + std::to_string(inst.size()));
}

inline std::int64_t total_weight(const Instance& inst, const Packing& x) {
    check_length(inst, x);
    std::int64_t s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) s += inst.weight(i);
    return s;
}

inline std::int64_t total_value(const Instance& inst, const Packing& x) {
    check_length(inst, x);
    std::int64_t s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) s += inst.profit(i);
    return s;
}

/// Ordered multiset of packings with a cached per-item frequency vector.
class Population {
public:
    Population() = default;

    explicit Population(std::vector<Packing> members) {
        for (auto& m : members) add(std::move(m));
    }

    static Population copies(const Packing& x, std::size_t mu) {
        return Population(std::vector<Packing>(mu, x));
    }

    void add(Packing x) {
        if (members_.empty()) {
            if (x.size() == 0) throw ContractError("packings must have at least one item");
            freq_.assign(x.size(), 0);
        } else if (x.size() != freq_.size()) {
            throw ContractError("packing length differs from population");
        }
        for (std::size_t i = 0; i < x.size(); ++i) freq_[i] += x[i] ? 1 : 0;
        members_.push_back(std::move(x));
    }

    void remove(std::size_t k) {
        if (k >= members_.size()) throw ContractError("member index out of range");
        const Packing& x = members_[k];
        for (std::size_t i = 0; i < x.size(); ++i) freq_[i] -= x[i] ? 1 : 0;
        members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(k));
    }

    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    std::size_t item_count() const { return freq_.size(); }
    const Packing& operator[](std::size_t k) const { return members_[k]; }
    const std::vector<Packing>& members() const { return members_; }
    const std::vector<std::int64_t>& freq() const { return freq_; }

private:
    std::vector<Packing> members_;
    std::vector<std::int64_t> freq_;
};

/// Recounts h(i) from the members, ignoring the cache.
inline std::vector<std::int64_t> item_frequencies(const std::vector<Packing>& members) {
    if (members.empty()) throw ContractError("frequency of an empty population");
    std::vector<std::int64_t> h(members.front().size(), 0);
    for (const auto& x : members) {
        if (x.size() != h.size()) throw ContractError("packing length differs from population");
        for (std::size_t i = 0; i < x.size(); ++i) h[i] += x[i] ? 1 : 0;
    }
    return h;
}

inline std::vector<std::int64_t> item_frequencies(const Population& pop) {
    return item_frequencies(pop.members());
}

/// Evaluates entropies of populations of a fixed size s exactly up to the
/// final rounding. With counts c_i summing to S,
///   s * H = S ln s - sum c_i ln c_i = sum_p a_p ln p
/// over primes p <= s with integer a_p. Mathematically equal entropies have
/// equal coefficient vectors, hence bit-identical results, so ties between
/// survivors are exact and the lowest-index rule is well defined.
class EntropyBasis {
public:
    explicit EntropyBasis(std::int64_t size) : size_(size) {
        if (size < 1) throw ContractError("entropy needs a positive population size");
        const auto s = static_cast<std::size_t>(size);
        std::vector<std::size_t> prime_index(s + 1, SIZE_MAX);
        factors_.resize(s + 1);
        for (std::size_t c = 2; c <= s; ++c) {
            std::size_t r = c;
            for (std::size_t p = 2; p * p <= r; ++p) {
                std::int64_t e = 0;
                while (r % p == 0) {
                    r /= p;
                    ++e;
                }
                if (e) factors_[c].push_back({prime_index[p], e});
            }
            if (r > 1) {
                if (r == c) {
                    prime_index[c] = log_p_.size();
                    log_p_.push_back(std::log(static_cast<double>(c)));
                }
                factors_[c].push_back({prime_index[r], 1});
            }
        }
    }

    std::int64_t size() const { return size_; }

    /// Entropy from a histogram m[c] = number of items present in exactly c members.
    double from_histogram(const std::vector<std::int64_t>& m) const {
        std::vector<std::int64_t> a(log_p_.size(), 0);
        std::int64_t total = 0;
        for (std::size_t c = 1; c < m.size(); ++c) {
            if (m[c] == 0) continue;
            const auto weight = m[c] * static_cast<std::int64_t>(c);
            total += weight;
            for (const auto& [p, e] : factors_[c]) a[p] -= weight * e;
        }
        for (const auto& [p, e] : factors_[static_cast<std::size_t>(size_)]) a[p] += total * e;
        double s = 0.0;
        for (std::size_t p = 0; p < a.size(); ++p)
            if (a[p] != 0) s += static_cast<double>(a[p]) * log_p_[p];
        return s / static_cast<double>(size_);
    }

private:
    struct Factor {
        std::size_t prime;
        std::int64_t exponent;
    };
    std::int64_t size_;
    std::vector<double> log_p_;
    std::vector<std::vector<Factor>> factors_;
};

/// Entropy -sum f(i) ln f(i) of a frequency vector over basis.size() members.
inline double entropy_from_frequencies(const std::vector<std::int64_t>& h, const EntropyBasis& basis) {
    const auto size = basis.size();
    std::vector<std::int64_t> m(static_cast<std::size_t>(size) + 1, 0);
    for (auto c : h) {
        if (c < 0 || c > size) throw ContractError("item frequency out of range");
        ++m[static_cast<std::size_t>(c)];
    }
    return basis.from_histogram(m);
}

inline double entropy_from_frequencies(const std::vector<std::int64_t>& h, std::int64_t size) {
    return entropy_from_frequencies(h, EntropyBasis(size));
}

inline double population_entropy(const Population& pop) {
    if (pop.empty()) throw ContractError("entropy of an empty population");
    return entropy_from_frequencies(pop.freq(), static_cast<std::int64_t>(pop.size()));
}

namespace detail {
inline double entropy_without(const Population& pop, std::size_t k, const EntropyBasis& basis) {
    const auto& h = pop.freq();
    const Packing& x = pop[k];
    std::vector<std::int64_t> m(static_cast<std::size_t>(basis.size()) + 1, 0);
    for (std::size_t i = 0; i < h.size(); ++i) ++m[static_cast<std::size_t>(h[i] - (x[i] ? 1 : 0))];
    return basis.from_histogram(m);
}
}  // namespace detail

/// H(P \ {member k}) without materializing the smaller population.
inline double entropy_without(const Population& pop, std::size_t k) {
    if (pop.size() < 2) throw ContractError("entropy_without needs at least two members");
    if (k >= pop.size()) throw ContractError("member index out of range");
    return detail::entropy_without(pop, k, EntropyBasis(static_cast<std::int64_t>(pop.size()) - 1));
}

/// Upper bound n/e of the entropy of any population over n items.
inline double max_entropy(std::size_t n) { return static_cast<double>(n) * std::exp(-1.0); }

/// Quality constraints of one diversity-optimization run.
struct QualityBound {
    std::int64_t v_min = 0;
    std::int64_t capacity = 0;
    double epsilon = 0.0;
    std::optional<std::int64_t> opt_reference;
};

/// Real epsilon as an exact decimal fraction numerator / 10^12, so that
/// thresholds like 0.95 * v are computed without binary rounding drift.
inline constexpr std::int64_t kDecimalScale = 1'000'000'000'000;

inline std::int64_t to_decimal_fraction(double eps) {
    return static_cast<std::int64_t>(std::llround(eps * static_cast<double>(kDecimalScale)));
}

/// ceil((1 - eps/2) * value): the least profit an offspring may have.
inline std::int64_t quality_threshold(std::int64_t value, double eps) {
    const std::int64_t e = to_decimal_fraction(eps);
    if (e <= 0 || e >= kDecimalScale) throw ParameterError("epsilon must lie in (0,1)");
    // (1 - eps/2) = (2S - e) / 2S; keep the half exact by doubling the scale.
    const __int128 p = static_cast<__int128>(value) * (2 * kDecimalScale - e);
    const __int128 d = 2 * static_cast<__int128>(kDecimalScale);
    __int128 q = p / d;
    if (p % d > 0) ++q;
    return static_cast<std::int64_t>(q);
}

/// True iff value >= (1 - eps) * reference, evaluated exactly.
inline bool meets_ratio(std::int64_t value, std::int64_t reference, double eps) {
    const std::int64_t e = to_decimal_fraction(eps);
    return static_cast<__int128>(value) * kDecimalScale >=
           static_cast<__int128>(reference) * (kDecimalScale - e);
}

}  // namespace edo
