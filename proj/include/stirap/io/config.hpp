#pragma once

#include "stirap/core/types.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace stirap::io {

/// Malformed or schema-violating scenario (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output (exit code 4).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ValueType { Real, Integer, Boolean, Text, RealList };

inline const char* type_name(ValueType t) {
    switch (t) {
        case ValueType::Real: return "real";
        case ValueType::Integer: return "integer";
        case ValueType::Boolean: return "boolean";
        case ValueType::Text: return "text";
        default: return "list of reals";
    }
}

using Value = std::variant<double, long, bool, std::string, std::vector<double>>;

struct KeySpec {
    std::string key;
    ValueType type = ValueType::Real;
    std::optional<std::string> fallback;  // nullopt: required
    std::string doc;
    std::vector<std::string> choices;  // Text only; empty accepts anything
};

inline KeySpec required(std::string key, ValueType t, std::string doc) { return {std::move(key), t, std::nullopt, std::move(doc), {}}; }
inline KeySpec optional_key(std::string key, ValueType t, std::string fallback, std::string doc,
                            std::vector<std::string> choices = {}) {
    return {std::move(key), t, std::move(fallback), std::move(doc), std::move(choices)};
}

struct ProtocolSchema {
    std::string protocol;
    std::string unit;  // frequency unit of every [parameters] entry
    std::string summary;
    std::vector<KeySpec> parameters;

    const KeySpec* find(const std::string& key) const {
        auto it = std::find_if(parameters.begin(), parameters.end(), [&](const KeySpec& k) { return k.key == key; });
        return it == parameters.end() ? nullptr : &*it;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::optional<double> to_real(const std::string& s) {
    double x = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
    return x;
}

inline std::optional<long> to_integer(const std::string& s) {
    long x = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
    return x;
}

inline Value parse_value(const std::string& where, const std::string& raw, const KeySpec& spec) {
    const std::string s = trim(raw);
    auto bad = [&](const std::string& why) {
        return ConfigError("key '" + where + "': " + why + " (got '" + s + "', expected " + type_name(spec.type) + ")");
    };
    switch (spec.type) {
        case ValueType::Real: {
            auto x = to_real(s);
            if (!x) throw bad("not a number");
            return *x;
        }
        case ValueType::Integer: {
            auto x = to_integer(s);
            if (!x) throw bad("not an integer");
            return *x;
        }
        case ValueType::Boolean:
            if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
            if (s == "false" || s == "no" || s == "off" || s == "0") return false;
            throw bad("not a boolean");
        case ValueType::Text:
            if (!spec.choices.empty() && std::find(spec.choices.begin(), spec.choices.end(), s) == spec.choices.end()) {
                std::string all;
                for (const auto& c : spec.choices) all += (all.empty() ? "" : "|") + c;
                throw ConfigError("key '" + where + "': '" + s + "' is not one of " + all);
            }
            return s;
        default: {
            std::vector<double> v;
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                auto x = to_real(item);
                if (!x) throw bad("list entry '" + item + "' is not a number");
                v.push_back(*x);
            }
            return v;
        }
    }
}

}  // namespace detail

/// Typed, schema-checked physical parameters.
class ParameterSet {
public:
    ParameterSet() = default;
    ParameterSet(const ProtocolSchema* schema, std::map<std::string, Value> values)
        : schema_(schema), values_(std::move(values)) {}

    double real(const std::string& k) const {
        const Value& v = at(k);
        if (auto* i = std::get_if<long>(&v)) return static_cast<double>(*i);
        return std::get<double>(v);
    }
    long integer(const std::string& k) const { return std::get<long>(at(k)); }
    bool boolean(const std::string& k) const { return std::get<bool>(at(k)); }
    const std::string& text(const std::string& k) const { return std::get<std::string>(at(k)); }
    const std::vector<double>& list(const std::string& k) const { return std::get<std::vector<double>>(at(k)); }

    /// Replaces one numeric entry (sweeps); the key must be a real or integer parameter.
    void set_number(const std::string& k, double x) {
        const KeySpec* spec = schema_ ? schema_->find(k) : nullptr;
        if (!spec) throw ConfigError("sweep: unknown parameter '" + k + "'");
        if (spec->type == ValueType::Real) {
            values_[k] = x;
        } else if (spec->type == ValueType::Integer) {
            if (x != static_cast<double>(static_cast<long>(x)))
                throw ConfigError("sweep: parameter '" + k + "' is an integer, got " + std::to_string(x));
            values_[k] = static_cast<long>(x);
        } else {
            throw ConfigError("sweep: parameter '" + k + "' is not numeric");
        }
    }

    const std::map<std::string, Value>& values() const { return values_; }

private:
    const Value& at(const std::string& k) const {
        auto it = values_.find(k);
        if (it == values_.end()) throw ContractViolation("ParameterSet: '" + k + "' missing from schema");
        return it->second;
    }

    const ProtocolSchema* schema_ = nullptr;
    std::map<std::string, Value> values_;
};

enum class Format { Csv, Json };

inline Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw ConfigError("format must be csv or json, got '" + s + "'");
}

inline const char* extension(Format f) { return f == Format::Csv ? ".csv" : ".json"; }

struct SweepBlock {
    std::string parameter;  // key in [parameters]
    std::vector<double> values;
};

struct OutputBlock {
    Format format = Format::Csv;
    std::string prefix;
    std::size_t points = 2000;
};

struct Scenario {
    std::string name;
    std::string protocol;
    std::string unit;
    std::string description;
    ParameterSet parameters;
    std::optional<SweepBlock> sweep;
    OutputBlock output;
    std::string source;  // raw file text, hashed into the manifest
    std::string path;
};

/// Schema lookup supplied by the protocol registry.
using SchemaLookup = const ProtocolSchema* (*)(const std::string&);

namespace detail {

using boost::property_tree::ptree;

inline void reject_unknown(const ptree& section, const std::string& name, const std::vector<std::string>& allowed) {
    for (const auto& [k, v] : section) {
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw ConfigError("unknown key '" + name + "." + k + "'");
    }
}

inline std::optional<std::string> get(const ptree& section, const std::string& key) {
    auto c = section.get_child_optional(key);
    if (!c) return std::nullopt;
    return trim(c->data());
}

}  // namespace detail

/// Parses and validates scenario text. Nothing is computed or written here.
inline Scenario parse_scenario_text(const std::string& text, SchemaLookup lookup, const std::string& path = "<text>") {
    using detail::ptree;
    ptree pt;
    {
        std::istringstream in(text);
        try {
            boost::property_tree::ini_parser::read_ini(in, pt);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ConfigError(path + ": line " + std::to_string(e.line()) + ": " + e.message());
        }
    }
    for (const auto& [k, v] : pt) {
        if (v.empty()) throw ConfigError("key '" + k + "' outside any section");
        if (k != "scenario" && k != "parameters" && k != "sweep" && k != "output")
            throw ConfigError("unknown section '[" + k + "]'");
    }
    Scenario sc;
    sc.source = text;
    sc.path = path;

    const auto head = pt.get_child_optional("scenario");
    if (!head) throw ConfigError("missing section '[scenario]'");
    detail::reject_unknown(*head, "scenario", {"name", "protocol", "unit", "description"});
    auto name = detail::get(*head, "name");
    auto proto = detail::get(*head, "protocol");
    if (!name || name->empty()) throw ConfigError("missing required key 'scenario.name'");
    if (!proto || proto->empty()) throw ConfigError("missing required key 'scenario.protocol'");
    sc.name = *name;
    sc.protocol = *proto;
    sc.description = detail::get(*head, "description").value_or("");
    const ProtocolSchema* schema = lookup(sc.protocol);
    if (!schema) throw ConfigError("key 'scenario.protocol': unknown protocol '" + sc.protocol + "'");
    sc.unit = detail::get(*head, "unit").value_or(schema->unit);
    if (sc.unit != schema->unit)
        throw ConfigError("key 'scenario.unit': protocol " + sc.protocol + " is written in units of " + schema->unit +
                          ", got '" + sc.unit + "'");

    const ptree empty;
    const auto params_opt = pt.get_child_optional("parameters");
    const ptree& params = params_opt ? *params_opt : empty;
    std::vector<std::string> allowed;
    for (const auto& k : schema->parameters) allowed.push_back(k.key);
    detail::reject_unknown(params, "parameters", allowed);
    std::map<std::string, Value> values;
    for (const auto& spec : schema->parameters) {
        auto raw = detail::get(params, spec.key);
        if (!raw) {
            if (!spec.fallback) throw ConfigError("missing required key 'parameters." + spec.key + "' (" + spec.doc + ")");
            raw = spec.fallback;
        }
        values[spec.key] = detail::parse_value("parameters." + spec.key, *raw, spec);
    }
    sc.parameters = ParameterSet(schema, std::move(values));

    if (auto sw = pt.get_child_optional("sweep")) {
        detail::reject_unknown(*sw, "sweep", {"parameter", "values"});
        auto p = detail::get(*sw, "parameter");
        if (!p || p->empty()) throw ConfigError("missing required key 'sweep.parameter'");
        std::string key = *p;
        if (key.rfind("parameters.", 0) == 0) key = key.substr(11);
        const KeySpec* spec = schema->find(key);
        if (!spec) throw ConfigError("key 'sweep.parameter': unknown parameter '" + *p + "'");
        if (spec->type != ValueType::Real && spec->type != ValueType::Integer)
            throw ConfigError("key 'sweep.parameter': '" + key + "' is not numeric");
        auto raw = detail::get(*sw, "values");
        if (!raw) throw ConfigError("missing required key 'sweep.values'");
        KeySpec list_spec{"values", ValueType::RealList, std::nullopt, "", {}};
        auto v = std::get<std::vector<double>>(detail::parse_value("sweep.values", *raw, list_spec));
        if (v.empty()) throw ConfigError("key 'sweep.values': empty sweep list");
        for (double x : v) {
            ParameterSet probe = sc.parameters;
            probe.set_number(key, x);
        }
        sc.sweep = SweepBlock{key, std::move(v)};
    }

    sc.output.prefix = sc.name;
    if (auto out = pt.get_child_optional("output")) {
        detail::reject_unknown(*out, "output", {"format", "prefix", "points"});
        if (auto f = detail::get(*out, "format")) {
            try {
                sc.output.format = parse_format(*f);
            } catch (const ConfigError& e) {
                throw ConfigError(std::string("key 'output.format': ") + e.what());
            }
        }
        if (auto p = detail::get(*out, "prefix")) {
            if (p->empty() || p->find('/') != std::string::npos)
                throw ConfigError("key 'output.prefix': must be a nonempty file stem without '/'");
            sc.output.prefix = *p;
        }
        if (auto n = detail::get(*out, "points")) {
            auto x = detail::to_integer(*n);
            if (!x || *x < 2) throw ConfigError("key 'output.points': need an integer >= 2, got '" + *n + "'");
            sc.output.points = static_cast<std::size_t>(*x);
        }
    }
    return sc;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Scenario parse_scenario(const std::string& path, SchemaLookup lookup) {
    return parse_scenario_text(read_text_file(path), lookup, path);
}

}  // namespace stirap::io
