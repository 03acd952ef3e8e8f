#pragma once

#include "stirap/core/report.hpp"
#include "stirap/io/config.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace stirap::io {

using Json = nlohmann::ordered_json;

/// Named numeric columns of equal length.
struct Table {
    std::string name;  // file suffix, e.g. "populations"
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // data[c][row]
    std::map<std::string, std::string> metadata;

    std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }

    void add_column(std::string col, std::vector<double> values) {
        if (!data.empty() && values.size() != rows())
            throw ContractViolation("Table::add_column: column '" + col + "' has the wrong length");
        columns.push_back(std::move(col));
        data.push_back(std::move(values));
    }

    const std::vector<double>& column(const std::string& col) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == col) return data[i];
        throw ContractViolation("Table: no column '" + col + "'");
    }
};

/// Shortest text that parses back to the same double.
inline std::string format_double(double x) {
    std::array<char, 32> buf{};
    auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), r.ptr);
}

inline Table trajectory_table(const Trajectory& traj, const std::string& name = "populations") {
    Table t;
    t.name = name;
    t.add_column("t", traj.times());
    const auto& p = traj.populations();
    for (const auto& l : traj.basis().labels()) {
        const auto row = p.row(static_cast<Eigen::Index>(l.index));
        t.add_column("P_" + l.name, std::vector<double>(row.begin(), row.end()));
    }
    return t;
}

inline std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
    out += '\n';
    for (std::size_t r = 0; r < t.rows(); ++r) {
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            if (c) out += ',';
            out += format_double(t.data[c][r]);
        }
        out += '\n';
    }
    return out;
}

inline Json to_json(const Table& t) {
    Json j;
    j["name"] = t.name;
    Json meta = Json::object();
    for (const auto& [k, v] : t.metadata) meta[k] = v;
    j["metadata"] = meta;
    Json cols = Json::object();
    for (std::size_t c = 0; c < t.columns.size(); ++c) cols[t.columns[c]] = t.data[c];
    j["columns"] = cols;
    return j;
}

inline Table table_from_json(const Json& j) {
    Table t;
    t.name = j.at("name").get<std::string>();
    for (const auto& [k, v] : j.at("metadata").items()) t.metadata[k] = v.get<std::string>();
    for (const auto& [k, v] : j.at("columns").items()) t.add_column(k, v.get<std::vector<double>>());
    return t;
}

/// Everything a protocol run hands back to the runner.
struct RunResult {
    std::string protocol;
    double transfer_efficiency = 0.0;
    double peak_transient = 0.0;
    std::map<std::string, double> scalars;
    std::map<std::string, double> final_populations;
    std::vector<std::string> warnings;
    std::vector<Table> tables;
    PropagationDiagnostics diagnostics;
    bool has_dynamics = false;
};

inline RunResult result_from_report(const ProtocolReport& r) {
    RunResult out;
    out.protocol = r.protocol;
    out.transfer_efficiency = r.transfer_efficiency;
    out.peak_transient = r.peak_transient;
    out.scalars = r.scalars;
    if (r.effective_deviation) out.scalars["effective_deviation"] = *r.effective_deviation;
    out.final_populations = r.final_populations;
    out.warnings = r.warnings;
    if (r.trajectory) {
        out.tables.push_back(trajectory_table(*r.trajectory));
        out.diagnostics = r.trajectory->diagnostics();
        out.has_dynamics = true;
    }
    if (r.effective_trajectory) out.tables.push_back(trajectory_table(*r.effective_trajectory, "effective_populations"));
    return out;
}

inline Json report_json(const RunResult& r) {
    Json j;
    j["protocol"] = r.protocol;
    if (r.has_dynamics) {
        j["transfer_efficiency"] = r.transfer_efficiency;
        j["peak_transient"] = r.peak_transient;
    }
    Json fin = Json::object();
    for (const auto& [k, v] : r.final_populations) fin[k] = v;
    j["final_populations"] = fin;
    Json sc = Json::object();
    for (const auto& [k, v] : r.scalars) sc[k] = v;
    j["scalars"] = sc;
    j["warnings"] = r.warnings;
    return j;
}

/// Report as a two-column key/value table (CSV flavor).
inline std::string report_csv(const RunResult& r) {
    std::string out = "field,value\n";
    out += "protocol," + r.protocol + "\n";
    if (r.has_dynamics) {
        out += "transfer_efficiency," + format_double(r.transfer_efficiency) + "\n";
        out += "peak_transient," + format_double(r.peak_transient) + "\n";
    }
    for (const auto& [k, v] : r.final_populations) out += "P_" + k + "," + format_double(v) + "\n";
    for (const auto& [k, v] : r.scalars) out += k + "," + format_double(v) + "\n";
    for (const auto& w : r.warnings) {
        std::string q = w;
        for (std::size_t i = 0; (i = q.find('"', i)) != std::string::npos; i += 2) q.insert(i, "\"");
        out += "warning,\"" + q + "\"\n";
    }
    return out;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = digits[h & 0xf];
    return s;
}

inline void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

/// Writes a table in the requested format; returns the file name.
inline std::string emit_table(const Table& t, Format f, const std::filesystem::path& dir, const std::string& prefix) {
    const std::string file = prefix + "_" + t.name + extension(f);
    write_file(dir / file, f == Format::Csv ? to_csv(t) : to_json(t).dump(2) + "\n");
    return file;
}

inline std::string emit_report(const RunResult& r, Format f, const std::filesystem::path& dir,
                               const std::string& prefix) {
    const std::string file = prefix + "_report" + extension(f);
    write_file(dir / file, f == Format::Csv ? report_csv(r) : report_json(r).dump(2) + "\n");
    return file;
}

}  // namespace stirap::io
