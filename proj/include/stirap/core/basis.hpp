#pragma once

#include "stirap/core/types.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace stirap {

struct BasisLabel {
    std::string name;
    std::size_t index = 0;

    friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

/// Ordered list of uniquely named basis kets. Indices are always 0..D-1.
class Basis {
public:
    Basis() = default;

    explicit Basis(std::vector<std::string> names) {
        labels_.reserve(names.size());
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (lookup_.contains(names[i])) {
                throw ContractViolation("Basis: duplicate label '" + names[i] + "'");
            }
            lookup_.emplace(names[i], i);
            labels_.push_back({std::move(names[i]), i});
        }
    }

    Basis(std::initializer_list<const char*> names)
        : Basis(std::vector<std::string>(names.begin(), names.end())) {}

    /// Basis "0", "1", ..., "D-1".
    static Basis numbered(std::size_t dim) {
        std::vector<std::string> names;
        names.reserve(dim);
        for (std::size_t i = 0; i < dim; ++i) names.push_back(std::to_string(i));
        return Basis(std::move(names));
    }

    std::size_t size() const { return labels_.size(); }
    Eigen::Index dim() const { return static_cast<Eigen::Index>(labels_.size()); }

    const BasisLabel& operator[](std::size_t i) const { return labels_.at(i); }
    std::span<const BasisLabel> labels() const { return labels_; }

    std::optional<std::size_t> find(const std::string& name) const {
        if (auto it = lookup_.find(name); it != lookup_.end()) return it->second;
        return std::nullopt;
    }

    std::size_t index_of(const std::string& name) const {
        if (auto i = find(name)) return *i;
        throw ContractViolation("Basis: unknown label '" + name + "'");
    }

    bool contains(const std::string& name) const { return lookup_.contains(name); }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(labels_.size());
        for (const auto& l : labels_) out.push_back(l.name);
        return out;
    }

    friend bool operator==(const Basis& a, const Basis& b) { return a.labels_ == b.labels_; }

private:
    std::vector<BasisLabel> labels_;
    std::unordered_map<std::string, std::size_t> lookup_;
};

}  // namespace stirap
