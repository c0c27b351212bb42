// Command line front end: instance generation, FPTAS, single runs,
// experiment campaigns and result summaries.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "edo/ea.hpp"
#include "edo/fptas.hpp"
#include "edo/harness.hpp"
#include "edo/instance_gen.hpp"
#include "edo/io.hpp"

namespace {

int cmd_generate(const std::string& kind, std::int64_t n, std::int64_t range, std::uint64_t seed,
                 const std::string& out) {
    const auto inst = edo::generate(edo::GenSpec{edo::parse_instance_kind(kind), n, range, seed});
    edo::save_instance(inst, out);
    std::cout << "wrote " << inst.size() << " items to " << out << '\n';
    return 0;
}

int cmd_fptas(const std::string& path, std::int64_t D, double eps, bool exact) {
    const auto inst = edo::load_instance(path);
    const auto W = edo::capacity_for(inst, D);
    const auto r = edo::fptas_solve(inst, W, eps);
    std::cout << "capacity " << W << '\n'
              << "value " << r.value << '\n'
              << "weight " << r.weight << '\n'
              << "guarantee " << edo::format_number(r.guarantee) << '\n';
    if (exact) {
        const auto opt = edo::exact_optimum(inst, W);
        std::cout << "opt " << opt.value << '\n'
                  << "ratio " << edo::format_number(static_cast<double>(r.value) / static_cast<double>(opt.value))
                  << '\n';
    }
    return 0;
}

struct RunArgs {
    std::string instance, op = "bf", repair = "on", budget = "generous", out;
    std::int64_t D = 2, mu = 25;
    double eps = 0.5, pc = 0.0, beta = edo::kDefaultBeta;
    std::uint64_t seed = 0;
    bool exact = false;
};

int cmd_run(const RunArgs& a) {
    const auto inst = edo::load_instance(a.instance);
    const auto W = edo::capacity_for(inst, a.D);
    edo::EaConfig cfg;
    cfg.mu = a.mu;
    cfg.epsilon = a.eps;
    cfg.p_c = a.pc;
    cfg.mutation = edo::MutationOp(edo::parse_mutation_kind(a.op), a.beta);
    cfg.repair_enabled = a.repair == "on";
    cfg.budget = edo::Budget::parse(a.budget).resolve(a.mu, static_cast<std::int64_t>(inst.size()));
    cfg.seed = a.seed;
    std::optional<std::int64_t> opt;
    if (a.exact) opt = edo::exact_optimum(inst, W).value;
    const auto rec = edo::run(inst, W, cfg, opt);
    edo::write_file(a.out, edo::run_record_to_json(rec).dump(2) + "\n");
    std::cout << "final entropy " << edo::format_number(rec.final_entropy()) << " after " << cfg.budget
              << " iterations (" << rec.accepted_count << " accepted)\n";
    return 0;
}

int cmd_experiment(const std::string& spec_path, const std::string& out, unsigned workers) {
    auto spec = edo::experiment_spec_from_json(edo::ordered_json::parse(edo::read_file(spec_path)));
    if (!out.empty()) spec.output_dir = out;
    const auto table = edo::run_experiment(spec, workers);
    std::size_t failed = 0;
    for (const auto& r : table.rows) failed += r.ok ? 0 : 1;
    std::cout << table.rows.size() << " runs in " << (spec.output_dir / "results.csv").string() << " (" << failed
              << " failed)\n";
    return 0;
}

int cmd_summarize(const std::string& results, double alpha, bool two_sided, const std::string& out) {
    const auto table = edo::load_results(results);
    const auto summary =
        edo::summarize(table, alpha, two_sided ? edo::stats::Alternative::two_sided : edo::stats::Alternative::greater);
    const std::filesystem::path out_path(out);
    auto tests_path = out_path;
    tests_path.replace_extension();
    tests_path += ".tests.csv";
    edo::write_file(out_path, edo::summary_to_csv(summary));
    edo::write_file(tests_path, edo::tests_to_csv(summary));
    std::cout << summary.rows.size() << " summary rows to " << out_path.string() << ", tests to "
              << tests_path.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diversity optimization for the 0-1 knapsack problem"};
    app.require_subcommand(1);

    std::string kind, out, instance, spec, results;
    std::int64_t n = 100, range = 10'000, D = 2;
    std::uint64_t seed = 0;
    double eps = 0.5, alpha = 0.05;
    bool exact = false, two_sided = false;
    unsigned workers = 0;
    RunArgs run_args;

    auto* gen = app.add_subcommand("generate", "Generate a benchmark instance");
    gen->add_option("--kind", kind, "scorr | invscorr | uncorr | usw")
        ->required()
        ->check(CLI::IsMember({"scorr", "invscorr", "uncorr", "usw"}));
    gen->add_option("--n", n, "Number of items")->check(CLI::PositiveNumber);
    gen->add_option("--r", range, "Range parameter R")->check(CLI::Range(std::int64_t{10}, INT64_MAX));
    gen->add_option("--seed", seed, "Generator seed");
    gen->add_option("--out", out, "Output JSON file")->required();

    auto* fp = app.add_subcommand("fptas", "Run the FPTAS on an instance");
    fp->add_option("--instance", instance, "Instance JSON file")->required()->check(CLI::ExistingFile);
    fp->add_option("--d", D, "Capacity class D in [1,10]")->required()->check(CLI::Range(1, 10));
    fp->add_option("--eps", eps, "Approximation parameter in (0,1)")->required();
    fp->add_flag("--exact", exact, "Also run the exact DP oracle");

    auto* rn = app.add_subcommand("run", "Run the diversity-optimizing EA once");
    rn->add_option("--instance", run_args.instance, "Instance JSON file")->required()->check(CLI::ExistingFile);
    rn->add_option("--d", run_args.D, "Capacity class D in [1,10]")->required()->check(CLI::Range(1, 10));
    rn->add_option("--mu", run_args.mu, "Population size")->required()->check(CLI::PositiveNumber);
    rn->add_option("--eps", run_args.eps, "Quality parameter in (0,1)")->required();
    rn->add_option("--op", run_args.op, "Mutation operator")
        ->required()
        ->check(CLI::IsMember({"bf", "pbf", "htbf", "edo-bbf1", "edo-bbf2"}));
    rn->add_option("--pc", run_args.pc, "Crossover probability")->required()->check(CLI::Range(0.0, 1.0));
    rn->add_option("--repair", run_args.repair, "on | off")->required()->check(CLI::IsMember({"on", "off"}));
    rn->add_option("--budget", run_args.budget, "generous | restricted | INT")->required();
    rn->add_option("--seed", run_args.seed, "Run seed")->required();
    rn->add_option("--out", run_args.out, "Output run record (JSON)")->required();
    rn->add_option("--beta", run_args.beta, "Power-law exponent for htbf");
    rn->add_flag("--exact", run_args.exact, "Attach the exact optimum to the record");

    auto* ex = app.add_subcommand("experiment", "Run a parameter grid");
    ex->add_option("--spec", spec, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
    ex->add_option("--out", out, "Output directory");
    ex->add_option("--workers", workers, "Worker threads (0 = all cores)");

    auto* sm = app.add_subcommand("summarize", "Summarize a results table");
    sm->add_option("--results", results, "results.csv")->required()->check(CLI::ExistingFile);
    sm->add_option("--alpha", alpha, "Significance level")->required()->check(CLI::Range(0.0, 1.0));
    sm->add_option("--out", out, "Summary CSV; tests go to <stem>.tests.csv")->required();
    sm->add_flag("--two-sided", two_sided, "Two-sided instead of one-sided tests");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) return cmd_generate(kind, n, range, seed, out);
        if (*fp) return cmd_fptas(instance, D, eps, exact);
        if (*rn) return cmd_run(run_args);
        if (*ex) return cmd_experiment(spec, out, workers);
        if (*sm) return cmd_summarize(results, alpha, two_sided, out);
    } catch (const edo::ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
