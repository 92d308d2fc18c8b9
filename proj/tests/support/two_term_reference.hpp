#pragma once

#include <cstddef>
#include <vector>

#include "advecta/expr.hpp"
#include "advecta/matrix.hpp"
#include "advecta/trajectory.hpp"

namespace advecta::testing {

/// Dedicated two-term path: drift, contraction constant and mapping written
/// out with A and B explicit instead of a term loop, on its own RK4 grid.
/// Cross-checks that the general N-term machinery reduces to the two-term
/// form exactly (up to summation-order roundoff).
class TwoTermReference {
public:
    TwoTermReference(int n, double t0, std::vector<Expression> a_entries,
                     Expression a_advance, std::vector<Expression> b_entries,
                     Expression b_advance);

    Matrix drift(double t) const;

    /// Own grid of Phi(t_k, t0) with cached inverses, reusing only the dense
    /// matrix kernels.
    void build_grid(double T, double dt, int lookahead_depth);

    std::size_t grid_size() const { return phi_.size(); }
    std::size_t report_end() const { return report_end_; }
    const Matrix& phi(std::size_t k) const { return phi_[k]; }

    double alpha() const;

    Trajectory apply_H(const Trajectory& x, const Vector& x0) const;

    Trajectory picard(const Vector& x0, double tol, int max_iter, ExtensionPolicy policy,
                      bool* converged = nullptr) const;

private:
    Matrix eval_entries(const std::vector<Expression>& entries, double t) const;
    Vector eval_E(const Trajectory& x, double u) const;
    Vector inner_integral(const Trajectory& x, double s, double h) const;

    int n_;
    double t0_;
    std::vector<Expression> a_entries_;
    Expression a_advance_;
    std::vector<Expression> b_entries_;
    Expression b_advance_;

    double dt_ = 0.0;
    std::size_t report_end_ = 0;
    std::vector<Matrix> phi_;
    std::vector<Matrix> phi_inv_;
};

}  // namespace advecta::testing
