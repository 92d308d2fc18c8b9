#pragma once

#include <vector>

#include "advecta/expr.hpp"
#include "advecta/matrix.hpp"

namespace advecta {

/// How trajectory values are read past the end of the computed grid.
enum class ExtensionPolicy { HoldLastValue, Zero };

const char* to_string(ExtensionPolicy p) noexcept;

/// One advanced term: coefficient matrix expressions (row-major, n*n) and
/// the advance function h(t) >= 0.
struct Term {
    std::vector<Expression> coefficients;
    Expression advance;
};

/// The linear advanced system x'(t) + sum_j A_j(t) x(t + h_j(t)) = 0.
/// The classical two-term form is N = 2 with terms (A, h) and (B, r).
class AdvancedSystem {
public:
    AdvancedSystem(int n, double t0, std::vector<Term> terms);

    int dim() const { return n_; }
    double t0() const { return t0_; }
    int num_terms() const { return static_cast<int>(terms_.size()); }
    const Term& term(int j) const { return terms_[static_cast<std::size_t>(j)]; }

    /// Entrywise evaluation of A_j at time t (j is zero-based).
    Matrix coefficient(int j, double t) const;
    void coefficient(int j, double t, Matrix& out) const;

    /// Drift of the unperturbed linear problem: D(t) = -sum_j A_j(t),
    /// summed in term order.
    Matrix drift(double t) const;

    /// h_j(t). Values in [-1e-12, 0) clamp to zero; anything lower throws
    /// NegativeAdvance.
    double advance(int j, double t) const;

    /// Max of every h_j over the grid {a, a+dt, ..., b}.
    double max_advance(double a, double b, double dt) const;

private:
    int n_;
    double t0_;
    std::vector<Term> terms_;
};

/// Truncated computation window. The reporting window is [t0, T]; the
/// extended domain [t0, T_ext] adds lookahead_depth worth of maximal
/// advances so the integral operator can read ahead.
struct Horizon {
    double T = 0.0;
    double dt = 0.0;
    int lookahead_depth = 3;
    ExtensionPolicy extension = ExtensionPolicy::HoldLastValue;
};

/// Validates the horizon against the system's t0. Throws InvalidArgument
/// when dt <= 0, T < t0, or (T - t0)/dt is not an integer.
void validate_horizon(const AdvancedSystem& sys, const Horizon& hz);

/// End of the extended computation domain. The self-consistent bound
/// H_max = max_advance over [t0, T + (m-1) H_max] is approximated by m
/// iterations starting from the [t0, T] maximum; T_ext = T + m * H_max.
double extended_horizon(const AdvancedSystem& sys, const Horizon& hz);

}  // namespace advecta
