#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "advecta/matrix.hpp"
#include "advecta/system.hpp"

namespace advecta {

/// Sampled fundamental matrix solution of y' = D(t) y with cached inverses,
/// answering state-transition queries Phi(t, s) = Phi(t) Phi(s)^{-1}.
///
/// Built by classical 4th-order one-step integration from Phi(t0) = I over
/// the extended domain [t0, T_ext]. Construction is single-threaded; a
/// finished grid is immutable and safe for concurrent queries.
class TransitionGrid {
public:
    static TransitionGrid build(const AdvancedSystem& sys, const Horizon& hz);

    double t0() const { return t0_; }
    double dt() const { return dt_; }
    double reporting_end() const { return T_; }
    double extended_end() const { return time(size() - 1); }
    int dim() const { return n_; }
    const Horizon& horizon() const { return horizon_; }

    std::size_t size() const { return phi_.size(); }
    std::size_t report_end_index() const { return report_end_; }

    double time(std::size_t k) const { return t0_ + static_cast<double>(k) * dt_; }

    /// Snap a time to its grid index. OutOfDomain beyond [t0, T_ext],
    /// OffGrid if no grid point lies within dt/2.
    std::size_t index_of(double t) const;

    /// Phi(t_k, t0) as stored; Phi(t0, t0) is the identity exactly.
    const Matrix& phi(std::size_t k) const { return phi_[k]; }
    const Matrix& phi_inverse(std::size_t k) const { return phi_inv_[k]; }

    /// Phi(t, s), snapping both arguments. Equal indices return the exact
    /// identity.
    Matrix between(double t, double s) const;
    Matrix between_indices(std::size_t it, std::size_t is) const;

    /// ||Phi(t,s) Phi(s,r) - Phi(t,r)||_inf
    double chapman_kolmogorov_defect(double t, double s, double r) const;

    /// CSV: header "t,phi_1_1,...,phi_n_n", one row per grid point with
    /// Phi(t, t0) row-major.
    void write_csv(std::ostream& out) const;

private:
    TransitionGrid() = default;

    int n_ = 0;
    double t0_ = 0.0;
    double dt_ = 0.0;
    double T_ = 0.0;
    std::size_t report_end_ = 0;
    Horizon horizon_;
    std::vector<Matrix> phi_;
    std::vector<Matrix> phi_inv_;
};

}  // namespace advecta
