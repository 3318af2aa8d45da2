#ifndef STARMETRIC_LAW_REPORT_HPP
#define STARMETRIC_LAW_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace starmetric {

/// One law checked against a sample, with the first counterexample kept as a
/// structured witness. A witness carries enough values (inputs, both sides of
/// the violated inequality, the margin) that replaying it through the library
/// reproduces the failure.
struct LawCheck {
    std::string law;
    bool pass = true;
    std::size_t samples_tested = 0;
    nlohmann::json witness;  // null when the law passed
    std::string note;        // e.g. "consistent with continuity", "tolerance-ambiguous"
};

struct LawReport {
    std::string suite;
    std::vector<LawCheck> checks;
    double abs_tol = 0.0;
    double numeric_residuum_tol = 0.0;
    std::optional<std::uint64_t> sampling_seed;  // set when triples were subsampled
    nlohmann::json metadata;                     // suite-specific counters (region sizes etc.)

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    const LawCheck* find(std::string_view law) const {
        for (const auto& c : checks)
            if (c.law == law) return &c;
        return nullptr;
    }

    nlohmann::json to_json() const {
        nlohmann::json checks_json = nlohmann::json::array();
        for (const auto& c : checks) {
            nlohmann::json row = {
                {"law", c.law},
                {"pass", c.pass},
                {"samples_tested", c.samples_tested},
                {"witness", c.witness},
            };
            if (!c.note.empty()) row["note"] = c.note;
            checks_json.push_back(std::move(row));
        }
        nlohmann::json out = {
            {"suite", suite},
            {"pass", passed()},
            {"tolerances",
             {{"abs_tol", abs_tol}, {"numeric_residuum_tol", numeric_residuum_tol}}},
            {"checks", std::move(checks_json)},
        };
        if (sampling_seed) out["sampling_seed"] = *sampling_seed;
        if (!metadata.is_null()) out["metadata"] = metadata;
        return out;
    }
};

}  // namespace starmetric

#endif  // STARMETRIC_LAW_REPORT_HPP
