#pragma once

#include <cstddef>
#include <vector>

#include "advecta/matrix.hpp"
#include "advecta/system.hpp"
#include "advecta/trajectory.hpp"
#include "advecta/transition.hpp"

namespace advecta {

/// E_x(u) = sum_j A_j(u) x(u + h_j(u)), reading x through interpolation and
/// the extension policy.
Vector eval_E(const AdvancedSystem& sys, const Trajectory& x, double u);

/// One application of the integral mapping whose fixed point solves the
/// advanced system:
///
///   (Hx)(t) = Phi(t,t0) x0 + sum_j int_{t0}^{t} Phi(t,s) A_j(s)
///             int_s^{s+h_j(s)} E_x(u) du ds
///
/// Outer integral: composite trapezoid over grid points, accumulated
/// incrementally through the cached inverses. Inner integral: composite
/// trapezoid with ceil(h_j(s)/dt) subintervals and exact endpoints; when
/// h_j(s) is an integer multiple of dt the samples are grid points and E_x
/// is cached per grid index for the whole application.
///
/// (Hx)(t0) = x0 exactly.
Trajectory apply_H(const AdvancedSystem& sys, const TransitionGrid& grid, const Trajectory& x,
                   const Vector& x0);

struct IterationResult {
    Trajectory trajectory;
    std::vector<double> residuals;  // sup over the reporting window of |x^{k+1} - x^k|
    std::vector<double> ratios;     // residual_{k+1} / residual_k
    bool converged = false;
    int iterations = 0;
};

/// Picard iteration x^{k+1} = H x^k from x^0(t) = Phi(t,t0) x0 until the
/// reporting-window sup difference drops to tol. Non-convergence after
/// max_iter is reported in the result, not thrown; the residual history is
/// the evidence.
IterationResult picard_solve(const AdvancedSystem& sys, const TransitionGrid& grid,
                             const Vector& x0, double tol, int max_iter);

/// Independent verification that a trajectory solves the original advanced
/// system: max over interior reporting-window grid points of
/// |central-difference x'(t_k) + sum_j A_j(t_k) x(t_k + h_j(t_k))|_inf.
double ode_defect(const AdvancedSystem& sys, const Trajectory& x, std::size_t report_end);

}  // namespace advecta
