#pragma once

#include <deque>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "besov/common.hpp"

namespace besov {

/// Outcome of one property over many randomized trials.
struct Check {
    std::string name;
    std::string property;  ///< the statement under test
    bool asserted = true;  ///< false: recorded only, never fails the suite
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::vector<std::string> witnesses;
    std::map<std::string, double> metrics;

    static constexpr std::size_t kMaxWitnesses = 5;

    bool passed() const { return !asserted || failures == 0; }

    /// Counts one trial; the witness text is only built for failures.
    void record(bool ok, const std::function<std::string()>& witness = {}) {
        ++trials;
        if (ok) return;
        ++failures;
        if (witnesses.size() < kMaxWitnesses && witness) witnesses.push_back(witness());
    }

    void max_metric(const std::string& key, double value) {
        auto [it, inserted] = metrics.try_emplace(key, value);
        if (!inserted) it->second = std::max(it->second, value);
    }
};

struct SuiteReport {
    std::string suite;
    std::deque<Check> checks;  // stable references across add()

    bool passed() const {
        for (const auto& c : checks) {
            if (!c.passed()) return false;
        }
        return true;
    }

    Check& add(std::string name, std::string property, bool asserted = true) {
        checks.push_back({std::move(name), std::move(property), asserted, 0, 0, {}, {}});
        return checks.back();
    }

    const Check* find(const std::string& name) const {
        for (const auto& c : checks) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }
};

inline std::string describe_field(std::span<const double> v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
    return out + "]";
}

}  // namespace besov
