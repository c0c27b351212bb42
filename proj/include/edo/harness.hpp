#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <variant>
#include <vector>

#include "edo/ea.hpp"
#include "edo/instance_gen.hpp"
#include "edo/io.hpp"
#include "edo/stats.hpp"

namespace edo {

enum class BudgetMode { generous, restricted, custom };

struct Budget {
    BudgetMode mode = BudgetMode::generous;
    std::int64_t iterations = 0;  // custom only

    /// generous = mu * n, restricted = mu.
    std::int64_t resolve(std::int64_t mu, std::int64_t n) const {
        switch (mode) {
            case BudgetMode::generous: return mu * n;
            case BudgetMode::restricted: return mu;
            case BudgetMode::custom: return iterations;
        }
        return iterations;
    }

    static Budget parse(std::string_view s) {
        if (s == "generous") return {BudgetMode::generous, 0};
        if (s == "restricted") return {BudgetMode::restricted, 0};
        const auto v = parse_int(s);
        if (v < 1) throw ParameterError("budget must be positive");
        return {BudgetMode::custom, v};
    }

    std::string to_string() const {
        switch (mode) {
            case BudgetMode::generous: return "generous";
            case BudgetMode::restricted: return "restricted";
            case BudgetMode::custom: return std::to_string(iterations);
        }
        return "";
    }
};

struct ExperimentSpec {
    std::vector<InstanceKind> kinds{InstanceKind::uncorr};
    std::int64_t n = 100;
    std::int64_t range = 10'000;
    std::vector<std::int64_t> capacity_classes{2};
    std::vector<std::int64_t> mus{25};
    std::vector<double> epsilons{0.5};
    std::vector<MutationKind> operators{MutationKind::bf};
    std::vector<double> crossover_probs{0.0};
    std::vector<bool> repair_flags{true};
    std::int64_t repeats = 1;
    Budget budget;
    std::uint64_t master_seed = 0;
    double beta = kDefaultBeta;
    std::filesystem::path output_dir = "results";

    void validate() const {
        if (repeats < 1) throw ParameterError("repeats must be at least one");
        if (kinds.empty() || capacity_classes.empty() || mus.empty() || epsilons.empty() || operators.empty() ||
            crossover_probs.empty() || repair_flags.empty())
            throw ParameterError("experiment grid has an empty axis");
        for (auto d : capacity_classes)
            if (d < 1 || d > 10) throw ParameterError("capacity class D must lie in [1,10]");
    }

    std::uint64_t instance_seed(InstanceKind kind) const {
        return derive_seed(master_seed, "instance|" + std::string(edo::to_string(kind)));
    }
};

inline ExperimentSpec experiment_spec_from_json(const ordered_json& j) {
    ExperimentSpec s;
    try {
        s.kinds.clear();
        for (const auto& k : j.at("kinds")) s.kinds.push_back(parse_instance_kind(k.get<std::string>()));
        s.n = j.value("n", s.n);
        s.range = j.value("R", s.range);
        s.capacity_classes = j.at("D").get<std::vector<std::int64_t>>();
        s.mus = j.at("mu").get<std::vector<std::int64_t>>();
        s.epsilons = j.at("epsilon").get<std::vector<double>>();
        s.operators.clear();
        for (const auto& o : j.at("operators")) s.operators.push_back(parse_mutation_kind(o.get<std::string>()));
        s.crossover_probs = j.value("p_c", std::vector<double>{0.0});
        s.repair_flags = j.value("repair", std::vector<bool>{true});
        s.repeats = j.value("repeats", std::int64_t{1});
        if (j.contains("budget")) {
            const auto& b = j.at("budget");
            s.budget = b.is_number_integer() ? Budget::parse(std::to_string(b.get<std::int64_t>()))
                                             : Budget::parse(b.get<std::string>());
        }
        s.master_seed = j.value("master_seed", std::uint64_t{0});
        s.beta = j.value("beta", kDefaultBeta);
        if (j.contains("output_dir")) s.output_dir = j.at("output_dir").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("malformed experiment spec: ") + e.what());
    }
    s.validate();
    return s;
}

/// Grid coordinates of one run.
struct RunKey {
    InstanceKind kind = InstanceKind::uncorr;
    std::int64_t D = 2;
    std::int64_t mu = 25;
    double epsilon = 0.5;
    MutationKind op = MutationKind::bf;
    double p_c = 0.0;
    bool repair = true;
    std::int64_t repeat = 0;

    /// Canonical text form; also the input of the per-run seed derivation.
    std::string label() const {
        std::ostringstream s;
        s << edo::to_string(kind) << '|' << D << '|' << mu << '|' << format_number(epsilon) << '|'
          << edo::to_string(op) << '|' << format_number(p_c) << '|' << (repair ? "on" : "off") << '|' << repeat;
        return s.str();
    }

    friend bool operator==(const RunKey& a, const RunKey& b) { return a.label() == b.label(); }
};

struct ResultRow {
    RunKey key;
    bool ok = true;
    double final_entropy = 0.0;
    std::int64_t v_min = 0;
    std::int64_t fptas_value = 0;
    std::int64_t accepted_count = 0;
    double wall_time = 0.0;

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ResultsTable {
    std::vector<ResultRow> rows;

    friend bool operator==(const ResultsTable&, const ResultsTable&) = default;
};

inline constexpr std::string_view kResultsHeader =
    "kind,D,mu,epsilon,operator,p_c,repair,repeat,status,final_entropy,v_min,fptas_value,accepted_count,wall_time";

inline std::string to_csv_line(const ResultRow& r) {
    std::ostringstream s;
    const auto& k = r.key;
    s << edo::to_string(k.kind) << ',' << k.D << ',' << k.mu << ',' << format_number(k.epsilon) << ','
      << edo::to_string(k.op) << ',' << format_number(k.p_c) << ',' << (k.repair ? "on" : "off") << ','
      << k.repeat << ',' << (r.ok ? "ok" : "failed") << ',' << format_number(r.final_entropy) << ',' << r.v_min
      << ',' << r.fptas_value << ',' << r.accepted_count << ',' << format_number(r.wall_time);
    return s.str();
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline ResultRow parse_csv_line(std::string_view line) {
    const auto f = split_csv(line);
    if (f.size() != 14) throw ParameterError("results row has " + std::to_string(f.size()) + " fields, expected 14");
    ResultRow r;
    r.key.kind = parse_instance_kind(f[0]);
    r.key.D = parse_int(f[1]);
    r.key.mu = parse_int(f[2]);
    r.key.epsilon = parse_double(f[3]);
    r.key.op = parse_mutation_kind(f[4]);
    r.key.p_c = parse_double(f[5]);
    if (f[6] != "on" && f[6] != "off") throw ParameterError("repair flag must be on or off");
    r.key.repair = f[6] == "on";
    r.key.repeat = parse_int(f[7]);
    if (f[8] != "ok" && f[8] != "failed") throw ParameterError("status must be ok or failed");
    r.ok = f[8] == "ok";
    r.final_entropy = parse_double(f[9]);
    r.v_min = parse_int(f[10]);
    r.fptas_value = parse_int(f[11]);
    r.accepted_count = parse_int(f[12]);
    r.wall_time = parse_double(f[13]);
    return r;
}

inline std::string results_to_csv(const ResultsTable& t) {
    std::string out(kResultsHeader);
    out += '\n';
    for (const auto& r : t.rows) out += to_csv_line(r) + '\n';
    return out;
}

inline ResultsTable results_from_csv(std::string_view text) {
    ResultsTable t;
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = end + 1;
        if (line.empty()) continue;
        if (header) {
            if (line != kResultsHeader) throw ParameterError("unexpected results header");
            header = false;
            continue;
        }
        t.rows.push_back(parse_csv_line(line));
    }
    return t;
}

inline ResultsTable load_results(const std::filesystem::path& path) { return results_from_csv(read_file(path)); }

inline void save_results(const ResultsTable& t, const std::filesystem::path& path) {
    write_file(path, results_to_csv(t));
}

/// All run keys of the grid in canonical order.
inline std::vector<RunKey> expand_grid(const ExperimentSpec& spec) {
    std::vector<RunKey> keys;
    for (auto kind : spec.kinds)
        for (auto D : spec.capacity_classes)
            for (auto mu : spec.mus)
                for (auto eps : spec.epsilons)
                    for (auto op : spec.operators)
                        for (auto pc : spec.crossover_probs)
                            for (bool rep : spec.repair_flags)
                                for (std::int64_t r = 0; r < spec.repeats; ++r)
                                    keys.push_back(RunKey{kind, D, mu, eps, op, pc, rep, r});
    return keys;
}

inline std::uint64_t run_seed(const ExperimentSpec& spec, const RunKey& key) {
    return derive_seed(spec.master_seed, "run|" + key.label());
}

inline EaConfig config_for(const ExperimentSpec& spec, const RunKey& key) {
    EaConfig cfg;
    cfg.mu = key.mu;
    cfg.epsilon = key.epsilon;
    cfg.p_c = key.p_c;
    cfg.mutation = MutationOp(key.op, spec.beta);
    cfg.repair_enabled = key.repair;
    cfg.budget = spec.budget.resolve(key.mu, spec.n);
    cfg.seed = run_seed(spec, key);
    return cfg;
}

/// Executes one grid cell. Any exception becomes a failed row.
inline ResultRow execute_run(const ExperimentSpec& spec, const Instance& inst, const RunKey& key) {
    ResultRow row;
    row.key = key;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const auto rec = run(inst, capacity_for(inst, key.D), config_for(spec, key));
        row.final_entropy = canonical(rec.final_entropy());
        row.v_min = rec.bound.v_min;
        row.fptas_value = rec.fptas_value;
        row.accepted_count = rec.accepted_count;
    } catch (const std::exception& e) {
        row.ok = false;
        std::cerr << "run " << key.label() << " failed: " << e.what() << '\n';
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    row.wall_time = canonical(dt.count());
    return row;
}

/// Runs every grid cell that is not yet in `output_dir/results.csv`.
///
/// Completed rows are appended to the CSV as they finish, so an interrupted
/// campaign resumes where it stopped. On completion the file is rewritten in
/// canonical grid order. Instances go to `output_dir/instances/<kind>.json`.
inline ResultsTable run_experiment(const ExperimentSpec& spec, unsigned workers = 0) {
    spec.validate();
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(spec.output_dir / "instances", ec);
    if (ec) throw IoError("cannot create " + (spec.output_dir / "instances").string() + ": " + ec.message());

    std::map<InstanceKind, Instance> instances;
    for (auto kind : spec.kinds) {
        auto inst = generate(GenSpec{kind, spec.n, spec.range, spec.instance_seed(kind)});
        save_instance(inst, spec.output_dir / "instances" / (std::string(to_string(kind)) + ".json"));
        instances.emplace(kind, std::move(inst));
    }

    const fs::path csv = spec.output_dir / "results.csv";
    std::map<std::string, ResultRow> done;
    if (fs::exists(csv)) {
        for (auto& r : load_results(csv).rows) done.emplace(r.key.label(), r);
    } else {
        write_file(csv, std::string(kResultsHeader) + "\n");
    }

    const auto keys = expand_grid(spec);
    std::vector<RunKey> todo;
    for (const auto& k : keys)
        if (!done.count(k.label())) todo.push_back(k);

    std::ofstream out(csv, std::ios::app);
    if (!out) throw IoError("cannot append to " + csv.string());
    std::mutex sink;
    std::atomic<std::size_t> next{0};
    if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(todo.size(), 1)));

    auto worker = [&] {
        for (std::size_t i = next++; i < todo.size(); i = next++) {
            auto row = execute_run(spec, instances.at(todo[i].kind), todo[i]);
            std::lock_guard lock(sink);
            out << to_csv_line(row) << '\n' << std::flush;
            done.emplace(row.key.label(), std::move(row));
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    pool.clear();
    out.close();

    ResultsTable table;
    for (const auto& k : keys) table.rows.push_back(done.at(k.label()));
    save_results(table, csv);
    return table;
}

// ---------------------------------------------------------------------------
// summaries

struct SummaryRow {
    std::string setup;      // kind, D, mu, epsilon
    std::string algorithm;  // operator, p_c, repair
    std::size_t runs = 0;
    std::size_t failed = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double mean_deviation = 0.0;    // percent below the best run of the setup
    double median_deviation = 0.0;
    std::string warning;
};

struct SetupReport {
    std::string group;  // setup plus the shared p_c and repair settings
    stats::TestReport report;
};

struct Summary {
    std::vector<SummaryRow> rows;
    std::vector<SetupReport> tests;
};

inline std::string setup_label(const RunKey& k) {
    return std::string(to_string(k.kind)) + " D=" + std::to_string(k.D) + " mu=" + std::to_string(k.mu) +
           " eps=" + format_number(k.epsilon);
}

inline std::string variant_label(const RunKey& k) {
    return "pc=" + format_number(k.p_c) + " repair=" + (k.repair ? "on" : "off");
}

inline std::string algorithm_label(const RunKey& k) {
    return std::string(to_string(k.op)) + " " + variant_label(k);
}

inline double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2.0;
}

/// Per-setup mean/std of final entropy, deviation from the setup's best run,
/// and Holm-corrected pairwise rank-sum tests among the operators that share
/// a (p_c, repair) variant.
inline Summary summarize(const ResultsTable& table, double alpha = 0.05,
                         stats::Alternative alt = stats::Alternative::greater) {
    // ordered by first appearance
    std::vector<std::string> setups;
    std::map<std::string, std::vector<std::string>> algos_of;
    std::map<std::pair<std::string, std::string>, std::vector<const ResultRow*>> groups;
    std::map<std::string, double> best;
    for (const auto& r : table.rows) {
        const auto s = setup_label(r.key), a = algorithm_label(r.key);
        if (!algos_of.count(s)) setups.push_back(s);
        auto& algos = algos_of[s];
        if (std::find(algos.begin(), algos.end(), a) == algos.end()) algos.push_back(a);
        groups[{s, a}].push_back(&r);
        if (r.ok) best[s] = std::max(best[s], r.final_entropy);
    }

    Summary out;
    for (const auto& s : setups) {
        std::map<std::string, std::vector<stats::NamedSample>> by_variant;
        std::vector<std::string> variants;
        for (const auto& a : algos_of[s]) {
            const auto& rows = groups[{s, a}];
            SummaryRow row;
            row.setup = s;
            row.algorithm = a;
            std::vector<double> h, dev;
            for (const auto* r : rows) {
                if (!r->ok) {
                    ++row.failed;
                    continue;
                }
                h.push_back(r->final_entropy);
                const double top = best[s];
                dev.push_back(top > 0.0 ? 100.0 * (top - r->final_entropy) / top : 0.0);
            }
            row.runs = h.size();
            if (h.empty()) {
                row.warning = "no completed runs";
                out.rows.push_back(row);
                continue;
            }
            for (double x : h) row.mean += x;
            row.mean /= static_cast<double>(h.size());
            row.stddev = sample_std(h);
            for (double d : dev) row.mean_deviation += d;
            row.mean_deviation /= static_cast<double>(dev.size());
            row.median_deviation = median(dev);
            out.rows.push_back(row);

            const auto v = variant_label(rows.front()->key);
            if (!by_variant.count(v)) variants.push_back(v);
            by_variant[v].push_back({std::string(to_string(rows.front()->key.op)), std::move(h)});
        }
        for (const auto& v : variants) {
            if (by_variant[v].size() < 2) continue;
            out.tests.push_back({s + " " + v, stats::pairwise_tests(by_variant[v], alpha, alt)});
        }
    }
    return out;
}

inline constexpr std::string_view kSummaryHeader =
    "setup,algorithm,runs,failed,mean,std,mean_deviation_pct,median_deviation_pct,warning";
inline constexpr std::string_view kTestsHeader = "setup,algo_a,algo_b,p,reject,direction";

inline std::string summary_to_csv(const Summary& s) {
    std::string out(kSummaryHeader);
    out += '\n';
    for (const auto& r : s.rows) {
        out += r.setup + ',' + r.algorithm + ',' + std::to_string(r.runs) + ',' + std::to_string(r.failed) + ',' +
               format_number(r.mean) + ',' + format_number(r.stddev) + ',' + format_number(r.mean_deviation) + ',' +
               format_number(r.median_deviation) + ',' + r.warning + '\n';
    }
    return out;
}

inline std::string tests_to_csv(const Summary& s) {
    std::string out(kTestsHeader);
    out += '\n';
    for (const auto& g : s.tests)
        for (const auto& p : g.report.pairs)
            out += g.group + ',' + p.algo_a + ',' + p.algo_b + ',' + format_number(p.p_value) + ',' +
                   (p.reject ? "true" : "false") + ',' + stats::to_string(p.direction) + '\n';
    return out;
}

}  // namespace edo
