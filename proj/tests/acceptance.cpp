// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <string>

#include "edo/harness.hpp"
#include "oracles.hpp"

using namespace edo;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMasterSeed = 1;
const double kCeiling = max_entropy(100);

int failures = 0;
double highest_entropy = 0.0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(double v) { return format_number(v, 5); }

fs::path scratch(const std::string& name) {
    std::random_device rd;
    auto p = fs::temp_directory_path() / ("edo_acceptance_" + std::to_string(rd()) + "_" + name);
    fs::remove_all(p);
    return p;
}

/// Runs a grid through the harness and returns the rows.
ResultsTable campaign(ExperimentSpec spec, const std::string& name) {
    spec.master_seed = kMasterSeed;
    spec.output_dir = scratch(name);
    auto t = run_experiment(spec, 0);
    fs::remove_all(spec.output_dir);
    for (const auto& r : t.rows) highest_entropy = std::max(highest_entropy, r.final_entropy);
    return t;
}

std::map<MutationKind, std::vector<double>> by_operator(const ResultsTable& t, double pc = -1.0) {
    std::map<MutationKind, std::vector<double>> out;
    for (const auto& r : t.rows)
        if (r.ok && (pc < 0 || r.key.p_c == pc)) out[r.key.op].push_back(r.final_entropy);
    return out;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

std::size_t failed_rows(const ResultsTable& t) {
    return static_cast<std::size_t>(std::count_if(t.rows.begin(), t.rows.end(), [](auto& r) { return !r.ok; }));
}

void criterion1() {
    ExperimentSpec s;
    s.kinds = {InstanceKind::uncorr};
    s.capacity_classes = {2};
    s.mus = {100};
    s.epsilons = {0.9};
    s.operators = {MutationKind::pbf, MutationKind::htbf};
    s.repeats = 10;
    s.budget = Budget::parse("generous");
    const auto t = campaign(s, "c1");
    auto h = by_operator(t);
    const double pbf = mean(h[MutationKind::pbf]), htbf = mean(h[MutationKind::htbf]);
    const bool pass = failed_rows(t) == 0 && std::abs(pbf - 36.79) <= 0.1 && std::abs(htbf - 36.79) <= 0.1 &&
                      highest_entropy <= kCeiling;
    report(1, pass,
           "uncorr D=2 mu=100 eps=0.9: pbf mean " + fmt(pbf) + ", htbf mean " + fmt(htbf) +
               " (target 36.79 +/- 0.1); max H so far " + fmt(highest_entropy) + " <= " + fmt(kCeiling));
}

void criterion2() {
    ExperimentSpec s;
    s.kinds = {InstanceKind::scorr};
    s.capacity_classes = {10};
    s.mus = {25};
    s.epsilons = {0.1};
    s.operators = {std::begin(kAllMutations), std::end(kAllMutations)};
    s.repeats = 10;
    s.budget = Budget::parse("generous");
    const auto t = campaign(s, "c2");
    std::size_t nonzero = 0;
    double worst = 0.0;
    for (const auto& r : t.rows)
        if (!r.ok || r.final_entropy != 0.0) {
            ++nonzero;
            worst = std::max(worst, r.final_entropy);
        }
    report(2, nonzero == 0,
           "scorr D=10 eps=0.1 mu=25, 5 operators x 10 repeats: " + std::to_string(nonzero) + "/" +
               std::to_string(t.rows.size()) + " runs with H != 0 (largest " + fmt(worst) + ")");
}

void criterion3() {
    Rng rng(derive_seed(kMasterSeed, "acceptance|fptas"));
    const InstanceKind kinds[] = {InstanceKind::scorr, InstanceKind::invscorr, InstanceKind::uncorr,
                                  InstanceKind::usw};
    const std::int64_t classes[] = {2, 5, 10};
    std::size_t violations = 0, mismatches = 0;
    for (int t = 0; t < 500; ++t) {
        const auto kind = kinds[t % 4];
        const auto n = static_cast<std::int64_t>(1 + rng.below(15));
        const auto inst = generate({kind, n, 10'000, rng.next()});
        const auto W = capacity_for(inst, classes[rng.below(3)]);
        const auto brute = oracle::knapsack(inst.weights(), inst.profits(), W).value;
        const auto opt = exact_optimum(inst, W).value;
        if (opt != brute) ++mismatches;
        for (double eps : {0.1, 0.5, 0.9}) {
            const auto r = fptas_solve(inst, W, eps);
            if (r.weight > W || !meets_ratio(r.value, brute, eps)) ++violations;
        }
    }
    report(3, violations == 0 && mismatches == 0,
           "500 instances n<=15: " + std::to_string(violations) + " ratio violations, " +
               std::to_string(mismatches) + " exact/brute-force mismatches");
}

void criterion4() {
    Rng rng(derive_seed(kMasterSeed, "acceptance|quality"));
    const std::int64_t classes[] = {2, 5, 10}, mus[] = {2, 10, 25};
    const double eps_values[] = {0.1, 0.2, 0.5, 0.9};
    std::size_t violations = 0, runs = 0;
    std::map<std::pair<InstanceKind, std::int64_t>, std::int64_t> opt_cache;
    for (int k = 0; k < 4; ++k) {
        const auto kind = static_cast<InstanceKind>(k);
        const auto inst = generate({kind, 100, 10'000, derive_seed(kMasterSeed, "acceptance|quality|" +
                                                                                   std::string(to_string(kind)))});
        for (int i = 0; i < 25; ++i) {
            const auto D = classes[rng.below(3)];
            const auto W = capacity_for(inst, D);
            auto& opt = opt_cache[{kind, D}];
            if (opt == 0) opt = exact_optimum(inst, W).value;
            EaConfig cfg;
            cfg.mu = mus[rng.below(3)];
            cfg.epsilon = eps_values[rng.below(4)];
            cfg.p_c = rng.bernoulli(0.5) ? 0.8 : 0.0;
            cfg.mutation = MutationOp(kAllMutations[rng.below(5)]);
            cfg.repair_enabled = rng.bernoulli(0.5);
            cfg.budget = cfg.mu * 100;
            cfg.seed = rng.next();
            const auto rec = run(inst, W, cfg, opt);
            ++runs;
            highest_entropy = std::max(highest_entropy, rec.final_entropy());
            for (const auto& x : rec.final_population.members())
                if (total_weight(inst, x) > W || !meets_ratio(total_value(inst, x), opt, cfg.epsilon)) ++violations;
        }
    }
    report(4, violations == 0,
           std::to_string(runs) + " runs with exact optimum attached: " + std::to_string(violations) +
               " members below (1-eps)*OPT or over capacity");
}

void criterion5() {
    ExperimentSpec s;
    s.kinds = {InstanceKind::scorr};
    s.capacity_classes = {2};
    s.mus = {25};
    s.epsilons = {0.5};
    s.operators = {std::begin(kAllMutations), std::end(kAllMutations)};
    s.repeats = 10;
    s.budget = Budget::parse("restricted");
    const auto t = campaign(s, "c5");
    auto h = by_operator(t);
    const double bf = mean(h[MutationKind::bf]), pbf = mean(h[MutationKind::pbf]),
                 htbf = mean(h[MutationKind::htbf]), b1 = mean(h[MutationKind::edo_bbf1]),
                 b2 = mean(h[MutationKind::edo_bbf2]);
    const bool ordered = b1 > b2 && b2 > htbf && htbf > pbf && pbf > bf;
    int separated = 0;
    for (std::size_t r = 0; r < h[MutationKind::bf].size(); ++r)
        if (h[MutationKind::edo_bbf1][r] >= 3.0 * h[MutationKind::bf][r]) ++separated;
    const bool magnitudes = b1 >= 18 && b1 <= 28 && bf >= 1.5 && bf <= 5;
    report(5, failed_rows(t) == 0 && ordered && separated >= 9 && magnitudes,
           "scorr D=2 mu=25 eps=0.5 budget 25: bbf1 " + fmt(b1) + ", bbf2 " + fmt(b2) + ", htbf " + fmt(htbf) +
               ", pbf " + fmt(pbf) + ", bf " + fmt(bf) + "; ordering " + (ordered ? "ok" : "violated") +
               ", bbf1 >= 3*bf in " + std::to_string(separated) + "/10 repeats, magnitudes " +
               (magnitudes ? "ok" : "outside [18,28] / [1.5,5]"));
}

void criterion6() {
    Rng rng(derive_seed(kMasterSeed, "acceptance|trace"));
    std::size_t bad = 0;
    for (int t = 0; t < 50; ++t) {
        const auto kind = static_cast<InstanceKind>(rng.below(4));
        const auto inst = generate({kind, static_cast<std::int64_t>(10 + rng.below(91)), 10'000, rng.next()});
        const std::int64_t classes[] = {2, 5, 10};
        EaConfig cfg;
        cfg.mu = static_cast<std::int64_t>(2 + rng.below(49));
        cfg.epsilon = std::vector<double>{0.1, 0.2, 0.5, 0.9}[rng.below(4)];
        cfg.p_c = rng.bernoulli(0.5) ? 0.8 : 0.0;
        cfg.mutation = MutationOp(kAllMutations[rng.below(5)]);
        cfg.repair_enabled = rng.bernoulli(0.5);
        cfg.budget = static_cast<std::int64_t>(1 + rng.below(2000));
        cfg.seed = rng.next();
        const auto rec = run(inst, capacity_for(inst, classes[rng.below(3)]), cfg);
        for (std::size_t i = 1; i < rec.entropy_trace.size(); ++i)
            if (rec.entropy_trace[i] < rec.entropy_trace[i - 1]) {
                ++bad;
                break;
            }
    }
    report(6, bad == 0, "50 random configurations: " + std::to_string(bad) + " traces with a decrease");
}

void criterion7() {
    Rng rng(derive_seed(kMasterSeed, "acceptance|survivor"));
    std::size_t agree = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto mu = 1 + rng.below(8), n = 1 + rng.below(12);
        const double density = rng.uniform01();
        Population p;
        for (std::size_t k = 0; k < mu + 1; ++k) {
            Packing x(n);
            for (std::size_t i = 0; i < n; ++i) x.set(i, rng.bernoulli(density));
            p.add(x);
        }
        if (select_survivor(p) == oracle::best_removal(oracle::to_bits(p))) ++agree;
    }
    report(7, agree == 1000, std::to_string(agree) + "/1000 populations agree with brute-force removal");
}

void criterion8() {
    const double p = stats::wmw_test({10, 11, 12}, {1, 2, 3});
    const auto rej = stats::holm_adjust({0.01, 0.03, 0.04}, 0.05);
    const auto count = std::count(rej.begin(), rej.end(), true);
    report(8, std::abs(p - 0.05) <= 1e-12 && count == 1,
           "exact p " + format_number(p, 15) + " (expect 0.05), holm rejections " + std::to_string(count));
}

void criterion9() {
    ExperimentSpec s;
    s.kinds = {InstanceKind::scorr};
    s.capacity_classes = {5};
    s.mus = {100};
    s.epsilons = {0.9};
    s.operators = {MutationKind::edo_bbf1};
    s.crossover_probs = {0.0, 0.8};
    s.repeats = 10;
    s.budget = Budget::parse("generous");
    const auto t = campaign(s, "c9");
    const double co = mean(by_operator(t, 0.8)[MutationKind::edo_bbf1]);
    const double plain = mean(by_operator(t, 0.0)[MutationKind::edo_bbf1]);
    report(9, failed_rows(t) == 0 && co - plain > 0.3,
           "scorr D=5 mu=100 eps=0.9 bbf1: p_c=0.8 mean " + fmt(co) + ", p_c=0 mean " + fmt(plain) +
               ", difference " + fmt(co - plain) + " (need > 0.3)");
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    std::printf("entropy ceiling %s: highest final H over all runs %s\n",
                highest_entropy <= kCeiling ? "respected" : "EXCEEDED", fmt(highest_entropy).c_str());
    std::printf("%d of 9 criteria failed, %.1f s\n", failures, dt.count());
    return failures == 0 ? 0 : 1;
}
