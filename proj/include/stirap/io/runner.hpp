#pragma once

#include "stirap/io/registry.hpp"
#include "stirap/version.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace stirap::io {

struct RunOptions {
    std::filesystem::path output_dir = "output";
    std::optional<Format> format;  // overrides the scenario's [output] format
    std::optional<long> seed;      // recorded only; the physics is deterministic
    std::size_t workers = 0;       // sweep workers; 0 picks hardware concurrency
};

struct RunManifest {
    std::string scenario;
    std::string protocol;
    std::string mode;  // "run" or "sweep"
    std::string scenario_hash;
    std::string code_version = kVersion;
    double wall_time = 0.0;
    PropagationDiagnostics diagnostics;
    std::vector<std::string> outputs;
    std::vector<std::string> warnings;
    std::optional<long> seed;
    RunResult result;  // run mode only
    Table sweep_table;  // sweep mode only

    Json to_json() const {
        Json j;
        j["scenario"] = scenario;
        j["protocol"] = protocol;
        j["mode"] = mode;
        j["scenario_hash"] = scenario_hash;
        j["code_version"] = code_version;
        j["wall_time_s"] = wall_time;
        if (seed) j["seed"] = *seed;
        j["diagnostics"] = {{"accepted_steps", diagnostics.accepted_steps},
                            {"rejected_steps", diagnostics.rejected_steps},
                            {"max_norm_drift", diagnostics.max_norm_drift},
                            {"convergence_error", diagnostics.convergence_error}};
        j["outputs"] = outputs;
        j["warnings"] = warnings;
        return j;
    }
};

inline std::string scenario_hash(const Scenario& sc) { return "fnv1a64:" + hex64(fnv1a(sc.source)); }

/// Runs the protocol of a validated scenario without touching the file system.
inline RunResult execute(const Scenario& sc) {
    const ProtocolEntry* e = find_protocol(sc.protocol);
    if (!e) throw ConfigError("key 'scenario.protocol': unknown protocol '" + sc.protocol + "'");
    return e->run(sc.parameters, sc.output.points);
}

namespace detail {

inline void merge(PropagationDiagnostics& into, const PropagationDiagnostics& d) {
    into.accepted_steps += d.accepted_steps;
    into.rejected_steps += d.rejected_steps;
    into.max_norm_drift = std::max(into.max_norm_drift, d.max_norm_drift);
    into.convergence_error = std::max(into.convergence_error, d.convergence_error);
}

inline void write_manifest(RunManifest& m, const std::filesystem::path& dir, const std::string& prefix) {
    const std::string file = prefix + "_manifest.json";
    m.outputs.push_back(file);
    write_file(dir / file, m.to_json().dump(2) + "\n");
}

}  // namespace detail

inline RunManifest run_scenario(const Scenario& sc, const RunOptions& opt = {}) {
    const auto start = std::chrono::steady_clock::now();
    const Format fmt = opt.format.value_or(sc.output.format);
    ensure_directory(opt.output_dir);
    RunManifest m;
    m.scenario = sc.name;
    m.protocol = sc.protocol;
    m.mode = "run";
    m.scenario_hash = scenario_hash(sc);
    m.seed = opt.seed;
    m.result = execute(sc);
    m.diagnostics = m.result.diagnostics;
    m.warnings = m.result.warnings;
    for (const auto& t : m.result.tables) m.outputs.push_back(emit_table(t, fmt, opt.output_dir, sc.output.prefix));
    m.outputs.push_back(emit_report(m.result, fmt, opt.output_dir, sc.output.prefix));
    m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail::write_manifest(m, opt.output_dir, sc.output.prefix);
    return m;
}

inline RunManifest run_scenario(const std::string& path, const RunOptions& opt = {}) {
    return run_scenario(parse_scenario(path, &find_schema), opt);
}

/// One row per sweep value, ascending; points run on parallel workers, files are written afterwards.
inline RunManifest sweep(const Scenario& sc, const RunOptions& opt = {}) {
    if (!sc.sweep) throw ConfigError("missing section '[sweep]'");
    if (sc.sweep->values.empty()) throw ConfigError("key 'sweep.values': empty sweep list");
    const auto start = std::chrono::steady_clock::now();
    const Format fmt = opt.format.value_or(sc.output.format);
    ensure_directory(opt.output_dir);

    std::vector<double> values = sc.sweep->values;
    std::stable_sort(values.begin(), values.end());
    std::vector<Scenario> points;
    for (double v : values) {
        Scenario s = sc;
        s.parameters.set_number(sc.sweep->parameter, v);
        points.push_back(std::move(s));
    }
    std::size_t workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, points.size());
    std::vector<RunResult> results(points.size());
    for (std::size_t first = 0; first < points.size(); first += workers) {
        std::vector<std::future<RunResult>> batch;
        const std::size_t last = std::min(points.size(), first + workers);
        for (std::size_t i = first; i < last; ++i)
            batch.push_back(std::async(std::launch::async, [&points, i] { return execute(points[i]); }));
        for (std::size_t i = first; i < last; ++i) results[i] = batch[i - first].get();
    }

    RunManifest m;
    m.scenario = sc.name;
    m.protocol = sc.protocol;
    m.mode = "sweep";
    m.scenario_hash = scenario_hash(sc);
    m.seed = opt.seed;
    Table t;
    t.name = "sweep";
    t.metadata["parameter"] = sc.sweep->parameter;
    std::vector<double> eff, peak, drift, steps;
    for (const auto& r : results) {
        eff.push_back(r.transfer_efficiency);
        peak.push_back(r.peak_transient);
        drift.push_back(r.diagnostics.max_norm_drift);
        steps.push_back(static_cast<double>(r.diagnostics.accepted_steps));
        detail::merge(m.diagnostics, r.diagnostics);
        for (const auto& w : r.warnings)
            if (std::find(m.warnings.begin(), m.warnings.end(), w) == m.warnings.end()) m.warnings.push_back(w);
    }
    t.add_column(sc.sweep->parameter, values);
    t.add_column("transfer_efficiency", eff);
    t.add_column("peak_transient", peak);
    t.add_column("max_norm_drift", drift);
    t.add_column("accepted_steps", steps);
    m.outputs.push_back(emit_table(t, fmt, opt.output_dir, sc.output.prefix));
    m.sweep_table = std::move(t);
    m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail::write_manifest(m, opt.output_dir, sc.output.prefix);
    return m;
}

inline RunManifest sweep(const std::string& path, const RunOptions& opt = {}) {
    return sweep(parse_scenario(path, &find_schema), opt);
}

}  // namespace stirap::io
