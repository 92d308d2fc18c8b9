#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "advecta/scenario.hpp"

namespace advecta {

/// Flag-level overrides applied on top of a loaded scenario.
struct CommandOverrides {
    std::optional<double> dt;
    std::optional<double> horizon;
    std::optional<int> lookahead;
    std::optional<ExtensionPolicy> extension;
    std::optional<double> lambda;         // certify: fixed decay rate instead of a scan
    std::optional<std::string> out;       // solve/sweep output path
    std::optional<std::string> dump_phi;  // analyze: write Phi(t, t0) CSV here
    bool policy_check = false;            // solve: rerun under the other extension policy
};

Scenario apply_overrides(Scenario scenario, const CommandOverrides& overrides);

/// Stability report JSON on `out`. Exit 0 when theorem 1 or theorem 3
/// certifies the scenario, 2 when neither does.
int cmd_analyze(const Scenario& scenario, const CommandOverrides& overrides, std::ostream& out);

/// Trajectory CSV plus an iteration-evidence JSON sidecar; the sidecar body
/// is echoed on `out`. Exit 0 when converged, 3 otherwise (outputs are still
/// written, flagged non-converged).
int cmd_solve(const Scenario& scenario, const CommandOverrides& overrides, std::ostream& out);

/// Exponential-convergence certificate JSON on `out`. Exit 0 when feasible,
/// 2 when infeasible or the transition family does not decay.
int cmd_certify(const Scenario& scenario, const CommandOverrides& overrides, std::ostream& out);

/// Cartesian sweep over the scenario's substitution variables; one CSV row
/// per point in deterministic declaration order. Points run concurrently.
int cmd_sweep(const Scenario& scenario, const CommandOverrides& overrides, std::ostream& out);

}  // namespace advecta
