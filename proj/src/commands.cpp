#include "advecta/commands.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "advecta/analysis.hpp"
#include "advecta/errors.hpp"
#include "advecta/fixedpoint.hpp"
#include "advecta/numfmt.hpp"

namespace advecta {

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    out << body;
    if (!out) fail(ErrorKind::IoError, "short write to " + path.string());
}

nlohmann::ordered_json solve_evidence(const Scenario& sc, const IterationResult& result,
                                      double defect) {
    nlohmann::ordered_json j;
    j["scenario"] = sc.name;
    j["converged"] = result.converged;
    j["iterations"] = result.iterations;
    j["residuals"] = result.residuals;
    j["ratios"] = result.ratios;
    j["ode_defect"] = defect;
    return j;
}

}  // namespace

Scenario apply_overrides(Scenario scenario, const CommandOverrides& overrides) {
    if (overrides.dt) scenario.dt = *overrides.dt;
    if (overrides.horizon) scenario.T = *overrides.horizon;
    if (overrides.lookahead) scenario.lookahead_depth = *overrides.lookahead;
    if (overrides.extension) scenario.extension = *overrides.extension;
    return scenario;
}

int cmd_analyze(const Scenario& scenario, const CommandOverrides& overrides, std::ostream& out) {
    const Scenario sc = apply_overrides(scenario, overrides);
    const AdvancedSystem sys = sc.system();
    const TransitionGrid grid = TransitionGrid::build(sys, sc.horizon());

    if (overrides.dump_phi) {
        std::ostringstream csv;
        grid.write_csv(csv);
        write_file(*overrides.dump_phi, csv.str());
    }

    AnalysisOptions options{sc.L, sc.x0, sc.phi_threshold};
    StabilityReport report = analyze_system(sys, grid, options);
    auto j = report.to_json();
    j["scenario"] = sc.name;
    out << j.dump(2) << '\n';
    return (report.thm1 || report.thm3) ? 0 : 2;
}

int cmd_solve(const Scenario& scenario, const CommandOverrides& overrides, std::ostream& out) {
    const Scenario sc = apply_overrides(scenario, overrides);
    const AdvancedSystem sys = sc.system();
    const TransitionGrid grid = TransitionGrid::build(sys, sc.horizon());

    IterationResult result = picard_solve(sys, grid, sc.x0, sc.tol, sc.max_iter);
    const double defect = ode_defect(sys, result.trajectory, grid.report_end_index());

    auto evidence = solve_evidence(sc, result, defect);
    if (overrides.policy_check) {
        Horizon other = sc.horizon();
        other.extension = other.extension == ExtensionPolicy::HoldLastValue
                              ? ExtensionPolicy::Zero
                              : ExtensionPolicy::HoldLastValue;
        const TransitionGrid alt_grid = TransitionGrid::build(sys, other);
        IterationResult alt = picard_solve(sys, alt_grid, sc.x0, sc.tol, sc.max_iter);
        double diff = 0.0;
        for (std::size_t k = 0; k <= grid.report_end_index(); ++k) {
            auto a = result.trajectory.at(k);
            auto b = alt.trajectory.at(k);
            for (std::size_t c = 0; c < a.size(); ++c) diff = std::max(diff, std::abs(a[c] - b[c]));
        }
        evidence["policy_sensitivity"] = diff;
    }

    const std::filesystem::path csv_path =
        overrides.out ? std::filesystem::path(*overrides.out)
                      : std::filesystem::path(sc.name + "_solution.csv");
    std::filesystem::path sidecar_path = csv_path;
    sidecar_path.replace_extension(".json");

    std::ostringstream csv;
    result.trajectory.write_csv(csv, grid.report_end_index());
    write_file(csv_path, csv.str());
    write_file(sidecar_path, evidence.dump(2) + "\n");

    out << evidence.dump(2) << '\n';
    return result.converged ? 0 : 3;
}

int cmd_certify(const Scenario& scenario, const CommandOverrides& overrides, std::ostream& out) {
    const Scenario sc = apply_overrides(scenario, overrides);
    const AdvancedSystem sys = sc.system();
    const TransitionGrid grid = TransitionGrid::build(sys, sc.horizon());

    nlohmann::ordered_json j;
    j["scenario"] = sc.name;

    std::vector<double> bounds;
    for (int t = 0; t < sys.num_terms(); ++t) {
        bounds.push_back(uniform_matrix_bound(sys.term(t).coefficients, sys.dim(), grid.t0(),
                                              grid.extended_end(), grid.dt()));
    }
    double bound_sum = 0.0;
    for (double b : bounds) bound_sum += b;
    j["coefficient_bounds"] = bounds;
    j["coefficient_bound_sum"] = bound_sum;

    ExponentialFit fit;
    try {
        fit = fit_exponential_bound(grid);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotDecaying) throw;
        j["M0"] = nullptr;
        j["lambda0"] = nullptr;
        j["lambda"] = nullptr;
        j["M"] = nullptr;
        j["feasible"] = false;
        j["reason"] = e.what();
        out << j.dump(2) << '\n';
        return 2;
    }
    j["M0"] = fit.M0;
    j["lambda0"] = fit.lambda0;

    const double x0_norm = vec_inf_norm(sc.x0);
    const Certificate cert =
        overrides.lambda
            ? exponential_certificate(fit.M0, fit.lambda0, bounds, x0_norm, grid.t0(),
                                      *overrides.lambda)
            : exponential_certificate_scan(fit.M0, fit.lambda0, bounds, x0_norm, grid.t0());

    j["lambda"] = cert.lambda;
    j["M"] = cert.feasible ? nlohmann::ordered_json(cert.M) : nlohmann::ordered_json(nullptr);
    j["rho"] = cert.rho;
    j["feasible"] = cert.feasible;
    out << j.dump(2) << '\n';
    return cert.feasible ? 0 : 2;
}

namespace {

struct SweepRow {
    std::vector<double> params;
    double alpha = 0.0;
    double K = 0.0;
    bool phi_vanishes = false;
    bool thm1 = false;
    bool thm3 = false;
    double decay_M = std::numeric_limits<double>::quiet_NaN();
    double decay_lambda = std::numeric_limits<double>::quiet_NaN();
    std::string error;
};

SweepRow run_sweep_point(const Scenario& base, const std::vector<std::string>& names,
                         const std::vector<double>& values) {
    SweepRow row;
    row.params = values;
    try {
        std::vector<std::pair<std::string, double>> bindings;
        for (std::size_t i = 0; i < names.size(); ++i) bindings.emplace_back(names[i], values[i]);
        const Scenario sc = substitute(base, bindings);
        const AdvancedSystem sys = sc.system();
        const TransitionGrid grid = TransitionGrid::build(sys, sc.horizon());

        AnalysisOptions options{sc.L, sc.x0, sc.phi_threshold};
        const StabilityReport report = analyze_system(sys, grid, options);
        row.alpha = report.alpha;
        row.K = report.K;
        row.phi_vanishes = report.phi_vanishes;
        row.thm1 = report.thm1;
        row.thm3 = report.thm3;

        const IterationResult solved = picard_solve(sys, grid, sc.x0, sc.tol, sc.max_iter);
        if (solved.converged) {
            try {
                const DecayFit decay = decay_rate(solved.trajectory, 0.5, grid.report_end_index());
                row.decay_M = decay.M;
                row.decay_lambda = decay.lambda;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::DegenerateWindow) throw;
            }
        }
    } catch (const Error& e) {
        row.error = e.what();
    }
    return row;
}

}  // namespace

int cmd_sweep(const Scenario& scenario, const CommandOverrides& overrides, std::ostream& out) {
    const Scenario sc = apply_overrides(scenario, overrides);
    if (!sc.has_sweep()) {
        fail(ErrorKind::SchemaError, "scenario has no sweep block");
    }

    std::vector<std::string> names;
    std::size_t npoints = 1;
    for (const auto& [name, values] : sc.sweep) {
        names.push_back(name);
        npoints *= values.size();
    }

    std::ostringstream body;
    for (const std::string& name : names) body << name << ',';
    body << "alpha,K,phi_vanishes,thm1,thm3,decay_M,decay_lambda\n";

    if (npoints > 0) {
        // Decode point index -> per-variable values in declaration-major
        // (lexicographic) order.
        auto point_values = [&](std::size_t index) {
            std::vector<double> values(names.size());
            for (std::size_t v = names.size(); v-- > 0;) {
                const auto& range = sc.sweep[v].second;
                values[v] = range[index % range.size()];
                index /= range.size();
            }
            return values;
        };

        std::vector<SweepRow> rows(npoints);
        std::atomic<std::size_t> cursor{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= npoints) return;
                rows[i] = run_sweep_point(sc, names, point_values(i));
            }
        };
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const auto nthreads = static_cast<unsigned>(std::min<std::size_t>(hw, npoints));
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();

        for (std::size_t i = 0; i < npoints; ++i) {
            if (!rows[i].error.empty()) {
                fail(ErrorKind::InvalidArgument,
                     "sweep point " + std::to_string(i) + " failed: " + rows[i].error);
            }
            for (double p : rows[i].params) body << format_double(p) << ',';
            body << format_double(rows[i].alpha) << ',' << format_double(rows[i].K) << ','
                 << (rows[i].phi_vanishes ? 1 : 0) << ',' << (rows[i].thm1 ? 1 : 0) << ','
                 << (rows[i].thm3 ? 1 : 0) << ',' << format_double(rows[i].decay_M) << ','
                 << format_double(rows[i].decay_lambda) << '\n';
        }
    }

    if (overrides.out) {
        write_file(*overrides.out, body.str());
    } else {
        out << body.str();
    }
    return 0;
}

}  // namespace advecta
