#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "edo/core.hpp"

namespace edo {

/// The profit-indexed DP table would exceed the configured cell budget.
struct OracleTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Default cap on items x profit-states in the DP reconstruction table (bits).
inline constexpr std::int64_t kDefaultDpCellCap = std::int64_t{1} << 31;

struct ExactResult {
    std::int64_t value = 0;
    Packing packing;
};

struct ApproxResult {
    Packing packing;
    std::int64_t value = 0;
    std::int64_t weight = 0;
    double epsilon_used = 0.0;
    double guarantee = 0.0;  // 1 - epsilon_used
};

namespace detail {

// Min-weight-per-profit DP over the items with w_i <= W and scaled profit > 0.
// Returns the packing of maximum scaled profit among states with weight <= W.
// Equal-profit states keep the lighter packing; on equal weight the state built
// from lower-index items survives because updates require strict improvement.
inline Packing max_profit_dp(const Instance& inst, std::int64_t W,
                             const std::vector<std::int64_t>& scaled, std::int64_t cell_cap) {
    const std::size_t n = inst.size();
    std::vector<std::size_t> items;
    std::int64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (inst.weight(i) <= W && scaled[i] > 0) {
            items.push_back(i);
            total += scaled[i];
        }
    }
    Packing best(n);
    if (items.empty()) return best;

    const auto states = static_cast<std::size_t>(total) + 1;
    if (static_cast<double>(items.size()) * static_cast<double>(states) > static_cast<double>(cell_cap))
        throw OracleTooLarge("profit DP needs " + std::to_string(items.size()) + " x " +
                             std::to_string(states) + " cells, cap is " + std::to_string(cell_cap));

    constexpr auto kInf = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> min_weight(states, kInf);
    min_weight[0] = 0;
    const std::size_t words = (states + 63) / 64;
    std::vector<std::uint64_t> took(items.size() * words, 0);

    std::size_t reach = 0;
    for (std::size_t j = 0; j < items.size(); ++j) {
        const auto sp = static_cast<std::size_t>(scaled[items[j]]);
        const std::int64_t w = inst.weight(items[j]);
        std::uint64_t* row = took.data() + j * words;
        reach += sp;
        for (std::size_t p = reach; p >= sp; --p) {
            const std::int64_t base = min_weight[p - sp];
            if (base == kInf) continue;
            if (base + w < min_weight[p]) {
                min_weight[p] = base + w;
                row[p / 64] |= std::uint64_t{1} << (p % 64);
            }
            if (p == sp) break;
        }
    }

    std::size_t p = states - 1;
    while (min_weight[p] > W) --p;
    for (std::size_t j = items.size(); j-- > 0;) {
        if (took[j * words + p / 64] >> (p % 64) & 1U) {
            best.set(items[j], true);
            p -= static_cast<std::size_t>(scaled[items[j]]);
        }
    }
    return best;
}

}  // namespace detail

/// Optimal packing for capacity W by exact dynamic programming over profits.
inline ExactResult exact_optimum(const Instance& inst, std::int64_t W,
                                 std::int64_t cell_cap = kDefaultDpCellCap) {
    if (W < 0) throw ParameterError("capacity must be non-negative");
    ExactResult r;
    r.packing = detail::max_profit_dp(inst, W, inst.profits(), cell_cap);
    r.value = total_value(inst, r.packing);
    return r;
}

/// Profit-scaling FPTAS: scales profits by K = max(1, eps * v_max / n) and
/// solves the scaled problem exactly. Value is at least (1 - eps) * OPT.
inline ApproxResult fptas_solve(const Instance& inst, std::int64_t W, double eps,
                                std::int64_t cell_cap = kDefaultDpCellCap) {
    if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("epsilon must lie in (0,1)");
    if (W < 0) throw ParameterError("capacity must be non-negative");
    const std::size_t n = inst.size();

    std::int64_t v_max = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (inst.weight(i) <= W) v_max = std::max(v_max, inst.profit(i));

    const double K = std::max(1.0, eps * static_cast<double>(v_max) / static_cast<double>(n));
    std::vector<std::int64_t> scaled(n);
    for (std::size_t i = 0; i < n; ++i)
        scaled[i] = K == 1.0 ? inst.profit(i)
                             : static_cast<std::int64_t>(std::floor(static_cast<double>(inst.profit(i)) / K));

    ApproxResult r;
    r.packing = detail::max_profit_dp(inst, W, scaled, cell_cap);
    r.value = total_value(inst, r.packing);
    r.weight = total_weight(inst, r.packing);
    r.epsilon_used = eps;
    r.guarantee = 1.0 - eps;
    return r;
}

}  // namespace edo
