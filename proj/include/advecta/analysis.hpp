#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "advecta/expr.hpp"
#include "advecta/matrix.hpp"
#include "advecta/system.hpp"
#include "advecta/trajectory.hpp"
#include "advecta/transition.hpp"

namespace advecta {

/// Time-uniform coefficient norm: max_i sum_j sup_t |a_ij(t)| with the sup
/// taken over the sampled grid of [a, b].
double uniform_matrix_bound(std::span<const Expression> entries, int n, double a, double b,
                            double dt);

/// env[m] = max over s of ||Phi(s + m*dt, s)||_inf across all grid pairs
/// m steps apart. env[0] is exactly 1.
std::vector<double> transition_norm_envelope(const TransitionGrid& grid);

/// Uniform transition bound K = sup over grid pairs s1 <= s2 of
/// ||Phi(s2, s1)||_inf. Always >= 1.
double compute_K(const TransitionGrid& grid);
double compute_K(std::span<const double> envelope);

struct PhiVanishes {
    bool flag = false;
    double tail_norm = 0.0;
};

/// Sampled surrogate for Phi(t, t0) -> 0: the tail norm must drop below the
/// threshold and the norm sequence over the last quarter of the grid must be
/// non-increasing within 10%.
PhiVanishes check_phi_vanishes(const TransitionGrid& grid, double threshold);

/// Contraction constant: sup over reporting-window grid points t of
///
///   sum_j int_{t0}^{t} ||Phi(t,s)|| ||A_j(s)|| int_s^{s+h_j(s)}
///         sum_k ||A_k(u)|| du ds
///
/// with pointwise induced infinity norms and the same trapezoid scheme as
/// the mapping itself.
double compute_alpha(const AdvancedSystem& sys, const TransitionGrid& grid);

/// Largest initial norm for which the mapping keeps the radius-L ball:
/// (1 - alpha) L / K. Throws InvalidCertificate when alpha >= 1.
double admissible_initial_bound(double K, double alpha, double L);

struct ExponentialFit {
    double M0 = 1.0;
    double lambda0 = 0.0;
};

/// Fit |Phi(t,s)| <= M0 e^{-lambda0 (t-s)}: lambda0 is minus the
/// least-squares slope through the log upper envelope binned by pair
/// distance; M0 then lifts the line until the bound holds for every sampled
/// pair by construction. Throws NotDecaying when the envelope slope is
/// nonnegative.
ExponentialFit fit_exponential_bound(const TransitionGrid& grid);

struct Certificate {
    bool feasible = false;
    double lambda = 0.0;
    double M = 0.0;
    double rho = 0.0;
};

/// Feasibility of the exponential-convergence inequality at decay rate
/// lambda: with S = sum of coefficient bounds, rho = S^2 M0 / (lambda
/// (lambda0 - lambda)); when rho < 1 the smallest admissible constant is
/// M = M0 ||x0|| e^{lambda0 t0} / (1 - rho). Throws InvalidCertificate
/// unless 0 < lambda < lambda0.
Certificate exponential_certificate(double M0, double lambda0, std::span<const double> coeff_bounds,
                                    double x0_norm, double t0, double lambda);

/// Scan lambda over (0, lambda0) at lambda0/1000 resolution and return the
/// feasible point minimizing M, or an infeasible result if none works.
Certificate exponential_certificate_scan(double M0, double lambda0,
                                         std::span<const double> coeff_bounds, double x0_norm,
                                         double t0);

struct DecayFit {
    double M = 0.0;
    double lambda = 0.0;
};

/// Least-squares fit of log |x(t)|_inf against t over the last
/// window_fraction of the reporting window, skipping samples below 1e-14.
/// Throws DegenerateWindow with fewer than 8 usable samples.
DecayFit decay_rate(const Trajectory& x, double window_fraction, std::size_t report_end);

/// Everything the theorems need, plus the verdicts themselves.
struct StabilityReport {
    double K = 0.0;
    double alpha = 0.0;
    bool phi_vanishes = false;
    double phi_tail_norm = 0.0;
    std::vector<double> coeff_bounds;
    double coeff_bound_sum = 0.0;
    bool exp_fit_ok = false;
    double M0 = 0.0;
    double lambda0 = 0.0;
    Certificate certificate;
    double L = 1.0;
    double x0_norm = 0.0;
    double x0_bound = 0.0;
    bool thm1 = false;
    bool thm2_i = false;
    bool thm2_ii = false;
    bool thm3 = false;

    // provenance
    double t0 = 0.0;
    double T = 0.0;
    double dt = 0.0;
    double t_ext = 0.0;
    int lookahead_depth = 0;
    ExtensionPolicy extension = ExtensionPolicy::HoldLastValue;
    int n = 0;
    int num_terms = 0;

    nlohmann::ordered_json to_json() const;
};

struct AnalysisOptions {
    double L = 1.0;
    Vector x0;
    double phi_threshold = 1e-6;
};

/// Runs every certificate computation over one grid and issues the theorem
/// verdicts: convergence to zero needs the finite uniform bound, a vanishing
/// transition matrix, and alpha < 1; exponential convergence needs finite
/// coefficient bounds, a successful exponential fit, and a feasible
/// certificate at some lambda.
StabilityReport analyze_system(const AdvancedSystem& sys, const TransitionGrid& grid,
                               const AnalysisOptions& options);

}  // namespace advecta
