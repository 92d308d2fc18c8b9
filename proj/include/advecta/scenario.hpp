#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "advecta/system.hpp"

namespace advecta {

/// A problem definition as read from a scenario JSON file. Expression
/// strings stay verbatim; the parsed AdvancedSystem is produced on demand.
struct Scenario {
    std::string name;
    int n = 1;
    double t0 = 0.0;
    double T = 0.0;
    double dt = 0.0;
    int lookahead_depth = 3;
    ExtensionPolicy extension = ExtensionPolicy::HoldLastValue;

    struct TermSpec {
        std::vector<std::string> coefficients;  // row-major n*n expression strings
        std::string advance;
    };
    std::vector<TermSpec> terms;

    std::vector<double> x0;
    double L = 1.0;
    double tol = 1e-8;
    int max_iter = 200;
    double phi_threshold = 1e-6;

    // Sweep substitution variables in declaration order, name -> values.
    std::vector<std::pair<std::string, std::vector<double>>> sweep;

    AdvancedSystem system() const;
    Horizon horizon() const;
    bool has_sweep() const { return !sweep.empty(); }
};

/// Parse and validate a scenario document. Throws SchemaError with the JSON
/// pointer of the offending field, SyntaxError naming the entry whose
/// expression fails to parse, or NegativeAdvance with the term index when an
/// advance samples negative over the reporting window.
Scenario scenario_from_json(const nlohmann::json& doc);

/// Load from disk. IoError when unreadable, SchemaError when not JSON.
Scenario load_scenario(const std::filesystem::path& path);

/// Replace every standalone identifier `name` in each expression string with
/// the literal value, producing a sweep-free scenario.
Scenario substitute(const Scenario& base,
                    const std::vector<std::pair<std::string, double>>& bindings);

}  // namespace advecta
