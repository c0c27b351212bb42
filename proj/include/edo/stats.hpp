#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "edo/core.hpp"

namespace edo::stats {

enum class Alternative { greater, two_sided };

/// Combined sample sizes up to this use the exact permutation distribution.
inline constexpr std::size_t kExactLimit = 20;

/// Mid-ranks (1-based) of the pooled values, ties share their mean rank.
inline std::vector<double> midranks(const std::vector<double>& pooled) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return pooled[a] < pooled[b]; });
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && pooled[idx[j + 1]] == pooled[idx[i]]) ++j;
        const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = mid;
        i = j + 1;
    }
    return r;
}

/// Mann-Whitney U of sample a: number of (a_i, b_j) pairs with a_i > b_j,
/// ties counted one half.
inline double mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto r = midranks(pooled);
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) rank_sum += r[i];
    const double na = static_cast<double>(a.size());
    return rank_sum - na * (na + 1.0) / 2.0;
}

namespace detail {
// Number of ways to pick `m` of the doubled mid-ranks with each doubled sum.
// Doubled mid-ranks are integers, so the count is exact.
inline std::vector<std::vector<double>> rank_sum_counts(const std::vector<std::int64_t>& doubled, std::size_t m) {
    const std::int64_t total = std::accumulate(doubled.begin(), doubled.end(), std::int64_t{0});
    std::vector<std::vector<double>> ways(m + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
    ways[0][0] = 1.0;
    for (auto r : doubled) {
        for (std::size_t k = m; k >= 1; --k) {
            auto& dst = ways[k];
            const auto& src = ways[k - 1];
            for (std::int64_t s = total; s >= r; --s)
                dst[static_cast<std::size_t>(s)] += src[static_cast<std::size_t>(s - r)];
        }
    }
    return ways;
}

inline double normal_upper(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }
}  // namespace detail

/// Wilcoxon-Mann-Whitney rank-sum test.
///
/// With `greater` the alternative is that a is stochastically larger than b and
/// the p-value is P(U >= u_obs). Exact under the conditional permutation
/// distribution (ties kept) when |a| + |b| <= 20, else the normal approximation
/// with tie-corrected variance and a 0.5 continuity correction.
inline double wmw_test(const std::vector<double>& a, const std::vector<double>& b,
                       Alternative alt = Alternative::greater) {
    if (a.empty() || b.empty()) throw ParameterError("rank-sum test needs two non-empty samples");
    const std::size_t na = a.size(), nb = b.size(), n = na + nb;
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto ranks = midranks(pooled);

    double upper = 0.0, lower = 0.0;  // P(U >= u), P(U <= u)
    if (n <= kExactLimit) {
        std::vector<std::int64_t> doubled(n);
        std::int64_t observed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            doubled[i] = std::llround(2.0 * ranks[i]);
            if (i < na) observed += doubled[i];
        }
        const auto ways = detail::rank_sum_counts(doubled, na);
        const auto& dist = ways[na];
        double all = 0.0, ge = 0.0, le = 0.0;
        for (std::size_t s = 0; s < dist.size(); ++s) {
            all += dist[s];
            if (static_cast<std::int64_t>(s) >= observed) ge += dist[s];
            if (static_cast<std::int64_t>(s) <= observed) le += dist[s];
        }
        upper = ge / all;
        lower = le / all;
    } else {
        const double u = mann_whitney_u(a, b);
        const double dna = static_cast<double>(na), dnb = static_cast<double>(nb), dn = static_cast<double>(n);
        const double mean = dna * dnb / 2.0;
        std::vector<double> sorted(pooled);
        std::sort(sorted.begin(), sorted.end());
        double tie_sum = 0.0;
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i;
            while (j < n && sorted[j] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i);
            tie_sum += t * t * t - t;
            i = j;
        }
        const double var = dna * dnb / 12.0 * ((dn + 1.0) - tie_sum / (dn * (dn - 1.0)));
        if (var <= 0.0) {
            upper = lower = 1.0;
        } else {
            const double sd = std::sqrt(var);
            upper = detail::normal_upper((u - mean - 0.5) / sd);
            lower = detail::normal_upper((mean - u - 0.5) / sd);
        }
    }
    upper = std::clamp(upper, 0.0, 1.0);
    lower = std::clamp(lower, 0.0, 1.0);
    if (alt == Alternative::greater) return upper;
    return std::min(1.0, 2.0 * std::min(upper, lower));
}

/// Holm step-down procedure. Returns reject flags in the input order.
inline std::vector<bool> holm_adjust(const std::vector<double>& p, double alpha) {
    for (double v : p)
        if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("p-values must lie in [0,1]");
    const std::size_t m = p.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return p[x] < p[y]; });
    std::vector<bool> reject(m, false);
    for (std::size_t k = 0; k < m; ++k) {
        if (p[order[k]] > alpha / static_cast<double>(m - k)) break;
        reject[order[k]] = true;
    }
    return reject;
}

enum class Direction { a_greater, b_greater, none };

inline std::string to_string(Direction d) {
    switch (d) {
        case Direction::a_greater: return "a_greater";
        case Direction::b_greater: return "b_greater";
        case Direction::none: return "none";
    }
    return "none";
}

struct PairResult {
    std::string algo_a;
    std::string algo_b;
    double p_value = 1.0;
    bool reject = false;
    Direction direction = Direction::none;
};

struct TestReport {
    std::vector<PairResult> pairs;
    double alpha = 0.05;
    std::string correction = "holm";
};

struct NamedSample {
    std::string name;
    std::vector<double> values;
};

/// All pairwise rank-sum tests among the samples, Holm-corrected together.
///
/// One-sided mode emits every ordered pair (a, b) testing "a greater than b";
/// a rejection reads as a_greater. Two-sided mode emits each unordered pair
/// once and orients a rejection by the mean ranks.
inline TestReport pairwise_tests(const std::vector<NamedSample>& samples, double alpha,
                                 Alternative alt = Alternative::greater) {
    TestReport report;
    report.alpha = alpha;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = 0; j < samples.size(); ++j) {
            if (i == j || (alt == Alternative::two_sided && j < i)) continue;
            PairResult r;
            r.algo_a = samples[i].name;
            r.algo_b = samples[j].name;
            r.p_value = wmw_test(samples[i].values, samples[j].values, alt);
            report.pairs.push_back(std::move(r));
        }
    }
    std::vector<double> ps;
    for (const auto& r : report.pairs) ps.push_back(r.p_value);
    const auto reject = holm_adjust(ps, alpha);
    for (std::size_t k = 0; k < report.pairs.size(); ++k) {
        auto& r = report.pairs[k];
        r.reject = reject[k];
        if (!r.reject) continue;
        if (alt == Alternative::greater) {
            r.direction = Direction::a_greater;
        } else {
            const auto& a = std::find_if(samples.begin(), samples.end(), [&](auto& s) { return s.name == r.algo_a; })->values;
            const auto& b = std::find_if(samples.begin(), samples.end(), [&](auto& s) { return s.name == r.algo_b; })->values;
            const double u = mann_whitney_u(a, b);
            const double half = static_cast<double>(a.size() * b.size()) / 2.0;
            r.direction = u > half ? Direction::a_greater : u < half ? Direction::b_greater : Direction::none;
        }
    }
    return report;
}

}  // namespace edo::stats
