#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

#include <json.hpp>

#include "edo/core.hpp"
#include "edo/ea.hpp"

namespace edo {

using ordered_json = nlohmann::ordered_json;

/// Raised when a file cannot be read or written; the message names the path.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Locale-independent shortest "%g"-style rendering with `digits` significant digits.
inline std::string format_number(double v, int digits = 6) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf, end);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParameterError("not a number: '" + std::string(s) + "'");
    return v;
}

inline std::int64_t parse_int(std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParameterError("not an integer: '" + std::string(s) + "'");
    return v;
}

/// Rounds through the persisted text form, so stored values survive a CSV round trip.
inline double canonical(double v, int digits = 6) { return parse_double(format_number(v, digits)); }

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

// Instance files: {kind, n, R, seed, weights, profits}, integers only.

inline ordered_json instance_to_json(const Instance& inst) {
    ordered_json j;
    j["kind"] = std::string(to_string(inst.kind()));
    j["n"] = inst.size();
    j["R"] = inst.range();
    j["seed"] = inst.gen_seed();
    j["weights"] = inst.weights();
    j["profits"] = inst.profits();
    return j;
}

inline Instance instance_from_json(const ordered_json& j) {
    try {
        auto w = j.at("weights").get<std::vector<std::int64_t>>();
        auto v = j.at("profits").get<std::vector<std::int64_t>>();
        if (j.at("n").get<std::size_t>() != w.size())
            throw ParameterError("instance field n does not match the item lists");
        return Instance(std::move(w), std::move(v), parse_instance_kind(j.at("kind").get<std::string>()),
                        j.at("R").get<std::int64_t>(), j.at("seed").get<std::uint64_t>());
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("malformed instance: ") + e.what());
    }
}

inline void save_instance(const Instance& inst, const std::filesystem::path& path) {
    write_file(path, instance_to_json(inst).dump(2) + "\n");
}

inline Instance load_instance(const std::filesystem::path& path) {
    ordered_json j;
    try {
        j = ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParameterError(path.string() + ": " + e.what());
    }
    return instance_from_json(j);
}

inline ordered_json config_to_json(const EaConfig& cfg) {
    ordered_json j;
    j["mu"] = cfg.mu;
    j["epsilon"] = cfg.epsilon;
    j["p_c"] = cfg.p_c;
    j["operator"] = std::string(to_string(cfg.mutation.kind()));
    if (cfg.mutation.kind() == MutationKind::htbf) j["beta"] = cfg.mutation.beta();
    j["repair"] = cfg.repair_enabled;
    j["budget"] = cfg.budget;
    j["seed"] = cfg.seed;
    return j;
}

/// Run record as JSON; the trace keeps only trace_checkpoints().
inline ordered_json run_record_to_json(const RunRecord& rec, std::int64_t full_trace_limit = 10'000) {
    ordered_json j;
    ordered_json inst;
    inst["kind"] = std::string(to_string(rec.instance_ref.kind));
    inst["n"] = rec.instance_ref.n;
    inst["R"] = rec.instance_ref.range;
    inst["seed"] = rec.instance_ref.seed;
    j["instance"] = inst;
    j["capacity"] = rec.bound.capacity;
    j["config"] = config_to_json(rec.config);
    j["fptas_value"] = rec.fptas_value;
    j["v_min"] = rec.bound.v_min;
    j["opt"] = rec.bound.opt_reference ? ordered_json(*rec.bound.opt_reference) : ordered_json(nullptr);
    j["accepted_count"] = rec.accepted_count;
    j["final_entropy"] = rec.final_entropy();
    ordered_json trace = ordered_json::array();
    for (auto it : trace_checkpoints(rec.config.budget, rec.config.mu, full_trace_limit))
        trace.push_back({it, rec.entropy_trace[static_cast<std::size_t>(it)]});
    j["trace"] = std::move(trace);
    ordered_json pop = ordered_json::array();
    for (const auto& x : rec.final_population.members()) pop.push_back(x.to_string());
    j["population"] = std::move(pop);
    return j;
}

}  // namespace edo
