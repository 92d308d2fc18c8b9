#include "advecta/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "advecta/errors.hpp"
#include "advecta/numfmt.hpp"

namespace advecta {

namespace {

constexpr double kAlignTolerance = 1e-9;
constexpr double kUsableSampleFloor = 1e-14;

double matrix_norm_at(const AdvancedSystem& sys, int j, double t, Matrix& scratch) {
    sys.coefficient(j, t, scratch);
    return mat_inf_norm(scratch);
}

// sum_k ||A_k(u)||, the inner integrand of the contraction constant.
double total_coefficient_norm(const AdvancedSystem& sys, double u, Matrix& scratch) {
    double s = 0.0;
    for (int k = 0; k < sys.num_terms(); ++k) s += matrix_norm_at(sys, k, u, scratch);
    return s;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit least_squares(std::span<const double> xs, std::span<const double> ys) {
    const auto n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) fail(ErrorKind::DegenerateWindow, "all samples at one abscissa");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

ExponentialFit fit_from_envelope(std::span<const double> envelope, double dt) {
    std::vector<double> taus(envelope.size());
    std::vector<double> logs(envelope.size());
    for (std::size_t m = 0; m < envelope.size(); ++m) {
        taus[m] = static_cast<double>(m) * dt;
        logs[m] = std::log(envelope[m]);
    }
    const LineFit line = least_squares(taus, logs);
    if (line.slope >= 0.0) {
        fail(ErrorKind::NotDecaying,
             "transition norm envelope slope " + format_double(line.slope) + " is nonnegative");
    }
    ExponentialFit fit;
    fit.lambda0 = -line.slope;
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < envelope.size(); ++m) {
        max_log = std::max(max_log, logs[m] + fit.lambda0 * taus[m]);
    }
    fit.M0 = std::exp(max_log);
    return fit;
}

}  // namespace

double uniform_matrix_bound(std::span<const Expression> entries, int n, double a, double b,
                            double dt) {
    if (b < a) fail(ErrorKind::InvalidArgument, "interval is reversed");
    if (dt <= 0.0) fail(ErrorKind::InvalidArgument, "sampling step must be positive");
    const auto steps = static_cast<std::size_t>(std::ceil((b - a) / dt - 1e-9));

    std::vector<double> sup(static_cast<std::size_t>(n) * n, 0.0);
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = (k == steps) ? b : a + static_cast<double>(k) * dt;
        for (std::size_t e = 0; e < sup.size(); ++e) {
            sup[e] = std::max(sup[e], std::abs(entries[e].eval(t)));
        }
    }
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += sup[static_cast<std::size_t>(i) * n + j];
        best = std::max(best, row);
    }
    return best;
}

std::vector<double> transition_norm_envelope(const TransitionGrid& grid) {
    const std::size_t points = grid.size();
    std::vector<double> env(points, 0.0);
    env[0] = 1.0;
    for (std::size_t i = 0; i < points; ++i) {
        const Matrix& inv = grid.phi_inverse(i);
        for (std::size_t k = i + 1; k < points; ++k) {
            env[k - i] = std::max(env[k - i], mat_inf_norm(grid.phi(k) * inv));
        }
    }
    return env;
}

double compute_K(std::span<const double> envelope) {
    double best = 1.0;
    for (double v : envelope) best = std::max(best, v);
    return best;
}

double compute_K(const TransitionGrid& grid) {
    return compute_K(transition_norm_envelope(grid));
}

PhiVanishes check_phi_vanishes(const TransitionGrid& grid, double threshold) {
    PhiVanishes out;
    const std::size_t points = grid.size();
    out.tail_norm = mat_inf_norm(grid.phi(points - 1));

    bool settling = true;
    const std::size_t start = points - points / 4;
    for (std::size_t k = (start > 0 ? start - 1 : 0); k + 1 < points; ++k) {
        if (mat_inf_norm(grid.phi(k + 1)) > 1.10 * mat_inf_norm(grid.phi(k))) {
            settling = false;
            break;
        }
    }
    out.flag = settling && out.tail_norm <= threshold;
    return out;
}

double compute_alpha(const AdvancedSystem& sys, const TransitionGrid& grid) {
    const std::size_t report_end = grid.report_end_index();
    const int terms = sys.num_terms();
    const double dt = grid.dt();
    Matrix scratch(sys.dim());

    // Grid-aligned cache of sum_k ||A_k||, shared by every inner integral.
    std::vector<double> total_norm;
    std::vector<char> total_known;
    auto total_at = [&](std::size_t i) {
        if (i >= total_norm.size()) {
            total_norm.resize((i + 1) * 2, 0.0);
            total_known.resize((i + 1) * 2, 0);
        }
        if (!total_known[i]) {
            total_norm[i] = total_coefficient_norm(sys, grid.t0() + static_cast<double>(i) * dt, scratch);
            total_known[i] = 1;
        }
        return total_norm[i];
    };

    // c(s_i) = sum_j ||A_j(s_i)|| * int_{s_i}^{s_i + h_j} sum_k ||A_k(u)|| du
    std::vector<double> weight(report_end + 1, 0.0);
    for (std::size_t i = 0; i <= report_end; ++i) {
        const double s = grid.time(i);
        double c = 0.0;
        for (int j = 0; j < terms; ++j) {
            const double h = sys.advance(j, s);
            if (h <= 0.0) continue;
            const double ratio = h / dt;
            const double rounded = std::round(ratio);
            double inner;
            if (rounded >= 1.0 && std::abs(ratio - rounded) <= kAlignTolerance * std::max(1.0, ratio)) {
                const auto m = static_cast<std::size_t>(rounded);
                inner = 0.5 * (total_at(i) + total_at(i + m));
                for (std::size_t l = 1; l < m; ++l) inner += total_at(i + l);
                inner *= dt;
            } else {
                const auto m = static_cast<std::size_t>(std::ceil(ratio - kAlignTolerance));
                const double step = h / static_cast<double>(m);
                inner = 0.5 * (total_at(i) + total_coefficient_norm(sys, s + h, scratch));
                for (std::size_t l = 1; l < m; ++l) {
                    inner += total_coefficient_norm(sys, s + static_cast<double>(l) * step, scratch);
                }
                inner *= step;
            }
            c += matrix_norm_at(sys, j, s, scratch) * inner;
        }
        weight[i] = c;
    }

    // sup over reporting-window t of the trapezoid sum of ||Phi(t,s)|| c(s).
    double alpha = 0.0;
    for (std::size_t k = 1; k <= report_end; ++k) {
        const Matrix& phi_k = grid.phi(k);
        double sum = 0.5 * mat_inf_norm(phi_k * grid.phi_inverse(0)) * weight[0];
        for (std::size_t i = 1; i < k; ++i) {
            sum += mat_inf_norm(phi_k * grid.phi_inverse(i)) * weight[i];
        }
        sum += 0.5 * weight[k];  // ||Phi(t_k, t_k)|| = 1
        alpha = std::max(alpha, sum * dt);
    }
    return alpha;
}

double admissible_initial_bound(double K, double alpha, double L) {
    if (K < 1.0) fail(ErrorKind::InvalidArgument, "uniform bound K must be at least 1");
    if (L <= 0.0) fail(ErrorKind::InvalidArgument, "ball radius L must be positive");
    if (alpha < 0.0 || alpha >= 1.0) {
        fail(ErrorKind::InvalidCertificate,
             "no admissible initial bound: alpha=" + format_double(alpha) + " is not below 1");
    }
    return (1.0 - alpha) * L / K;
}

ExponentialFit fit_exponential_bound(const TransitionGrid& grid) {
    return fit_from_envelope(transition_norm_envelope(grid), grid.dt());
}

Certificate exponential_certificate(double M0, double lambda0, std::span<const double> coeff_bounds,
                                    double x0_norm, double t0, double lambda) {
    if (M0 <= 0.0 || lambda0 <= 0.0) {
        fail(ErrorKind::InvalidCertificate, "exponential bound constants must be positive");
    }
    if (!(lambda > 0.0 && lambda < lambda0)) {
        fail(ErrorKind::InvalidCertificate,
             "lambda=" + format_double(lambda) + " must lie strictly inside (0, " +
                 format_double(lambda0) + ")");
    }
    double S = 0.0;
    for (double b : coeff_bounds) S += b;

    Certificate cert;
    cert.lambda = lambda;
    cert.rho = S * S * M0 / (lambda * (lambda0 - lambda));
    if (cert.rho < 1.0) {
        cert.feasible = true;
        cert.M = M0 * x0_norm * std::exp(lambda0 * t0) / (1.0 - cert.rho);
    }
    return cert;
}

Certificate exponential_certificate_scan(double M0, double lambda0,
                                         std::span<const double> coeff_bounds, double x0_norm,
                                         double t0) {
    Certificate best;
    best.rho = std::numeric_limits<double>::infinity();
    const double step = lambda0 / 1000.0;
    for (int i = 1; i < 1000; ++i) {
        const double lambda = static_cast<double>(i) * step;
        const Certificate cert =
            exponential_certificate(M0, lambda0, coeff_bounds, x0_norm, t0, lambda);
        if (cert.feasible && (!best.feasible || cert.M < best.M)) {
            best = cert;
        } else if (!best.feasible && cert.rho < best.rho) {
            best = cert;  // remember the least-infeasible point for reporting
        }
    }
    return best;
}

DecayFit decay_rate(const Trajectory& x, double window_fraction, std::size_t report_end) {
    if (window_fraction <= 0.0 || window_fraction > 1.0) {
        fail(ErrorKind::InvalidArgument, "window fraction must be in (0, 1]");
    }
    if (report_end >= x.size()) fail(ErrorKind::InvalidArgument, "report window beyond trajectory");

    const auto span = static_cast<std::size_t>(
        std::floor(window_fraction * static_cast<double>(report_end)));
    const std::size_t start = report_end - span;

    std::vector<double> ts;
    std::vector<double> logs;
    for (std::size_t k = start; k <= report_end; ++k) {
        const double norm = vec_inf_norm(x.at(k));
        if (norm < kUsableSampleFloor) continue;
        ts.push_back(x.t0() + static_cast<double>(k) * x.dt());
        logs.push_back(std::log(norm));
    }
    if (ts.size() < 8) {
        fail(ErrorKind::DegenerateWindow,
             "only " + std::to_string(ts.size()) + " usable samples in the decay window");
    }
    const LineFit line = least_squares(ts, logs);
    return DecayFit{std::exp(line.intercept), -line.slope};
}

nlohmann::ordered_json StabilityReport::to_json() const {
    nlohmann::ordered_json j;
    j["provenance"] = {
        {"n", n},
        {"num_terms", num_terms},
        {"t0", t0},
        {"horizon", T},
        {"dt", dt},
        {"extended_horizon", t_ext},
        {"lookahead_depth", lookahead_depth},
        {"extension", to_string(extension)},
    };
    j["K"] = K;
    j["alpha"] = alpha;
    j["phi_vanishes"] = {{"flag", phi_vanishes}, {"tail_norm", phi_tail_norm}};
    j["coefficient_bounds"] = coeff_bounds;
    j["coefficient_bound_sum"] = coeff_bound_sum;
    j["exponential_fit"] = {{"ok", exp_fit_ok}, {"M0", M0}, {"lambda0", lambda0}};
    j["certificate"] = {
        {"feasible", certificate.feasible},
        {"lambda", certificate.lambda},
        {"M", certificate.feasible ? nlohmann::ordered_json(certificate.M)
                                   : nlohmann::ordered_json(nullptr)},
        {"rho", certificate.rho},
    };
    j["L"] = L;
    j["x0_norm"] = x0_norm;
    j["x0_bound"] = x0_bound;
    j["verdicts"] = {
        {"thm1", thm1},
        {"thm2", {{"i", thm2_i}, {"ii", thm2_ii}}},
        {"thm3", thm3},
    };
    return j;
}

StabilityReport analyze_system(const AdvancedSystem& sys, const TransitionGrid& grid,
                               const AnalysisOptions& options) {
    StabilityReport report;
    report.n = sys.dim();
    report.num_terms = sys.num_terms();
    report.t0 = grid.t0();
    report.T = grid.reporting_end();
    report.dt = grid.dt();
    report.t_ext = grid.extended_end();
    report.lookahead_depth = grid.horizon().lookahead_depth;
    report.extension = grid.horizon().extension;
    report.L = options.L;
    report.x0_norm = options.x0.empty() ? 0.0 : vec_inf_norm(options.x0);

    const std::vector<double> envelope = transition_norm_envelope(grid);
    report.K = compute_K(envelope);

    const PhiVanishes vanish = check_phi_vanishes(grid, options.phi_threshold);
    report.phi_vanishes = vanish.flag;
    report.phi_tail_norm = vanish.tail_norm;

    report.alpha = compute_alpha(sys, grid);

    for (int j = 0; j < sys.num_terms(); ++j) {
        report.coeff_bounds.push_back(uniform_matrix_bound(
            sys.term(j).coefficients, sys.dim(), grid.t0(), grid.extended_end(), grid.dt()));
    }
    for (double b : report.coeff_bounds) report.coeff_bound_sum += b;

    try {
        // Reuse the envelope rather than re-scanning all pairs.
        const ExponentialFit fit = fit_from_envelope(envelope, grid.dt());
        report.M0 = fit.M0;
        report.lambda0 = fit.lambda0;
        report.exp_fit_ok = true;
    } catch (const Error&) {
        report.exp_fit_ok = false;
    }

    if (report.exp_fit_ok) {
        report.certificate = exponential_certificate_scan(report.M0, report.lambda0,
                                                          report.coeff_bounds, report.x0_norm,
                                                          grid.t0());
    }

    if (report.alpha < 1.0) {
        report.x0_bound = admissible_initial_bound(report.K, report.alpha, report.L);
    }

    report.thm1 = report.phi_vanishes && report.alpha < 1.0;
    report.thm2_i = report.thm1;
    report.thm3 = report.exp_fit_ok && report.certificate.feasible;
    report.thm2_ii = report.thm3;
    return report;
}

}  // namespace advecta
