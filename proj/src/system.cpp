#include "advecta/system.hpp"

#include <cmath>
#include <string>

#include "advecta/errors.hpp"
#include "advecta/numfmt.hpp"

namespace advecta {

namespace {
constexpr double kAdvanceClampTolerance = 1e-12;
}

const char* to_string(ExtensionPolicy p) noexcept {
    return p == ExtensionPolicy::HoldLastValue ? "hold" : "zero";
}

AdvancedSystem::AdvancedSystem(int n, double t0, std::vector<Term> terms)
    : n_(n), t0_(t0), terms_(std::move(terms)) {
    if (n_ < 1) fail(ErrorKind::InvalidArgument, "state dimension must be positive");
    if (terms_.empty()) fail(ErrorKind::InvalidArgument, "system needs at least one term");
    for (const Term& term : terms_) {
        if (term.coefficients.size() != static_cast<std::size_t>(n_) * n_) {
            fail(ErrorKind::InvalidArgument, "coefficient matrix is not n by n");
        }
    }
}

Matrix AdvancedSystem::coefficient(int j, double t) const {
    Matrix out(n_);
    coefficient(j, t, out);
    return out;
}

void AdvancedSystem::coefficient(int j, double t, Matrix& out) const {
    if (j < 0 || j >= num_terms()) {
        fail(ErrorKind::InvalidArgument, "term index " + std::to_string(j) + " out of range");
    }
    const Term& term = terms_[static_cast<std::size_t>(j)];
    for (int i = 0; i < n_; ++i) {
        for (int k = 0; k < n_; ++k) {
            out(i, k) = term.coefficients[static_cast<std::size_t>(i) * n_ + k].eval(t);
        }
    }
}

Matrix AdvancedSystem::drift(double t) const {
    Matrix d(n_);
    Matrix a(n_);
    for (int j = 0; j < num_terms(); ++j) {
        coefficient(j, t, a);
        d -= a;
    }
    return d;
}

double AdvancedSystem::advance(int j, double t) const {
    if (j < 0 || j >= num_terms()) {
        fail(ErrorKind::InvalidArgument, "term index " + std::to_string(j) + " out of range");
    }
    const double h = terms_[static_cast<std::size_t>(j)].advance.eval(t);
    if (h < -kAdvanceClampTolerance) {
        fail(ErrorKind::NegativeAdvance,
             "term " + std::to_string(j) + " advance is " + format_double(h) + " at t=" +
                 format_double(t));
    }
    return h < 0.0 ? 0.0 : h;
}

double AdvancedSystem::max_advance(double a, double b, double dt) const {
    if (b < a) fail(ErrorKind::InvalidArgument, "max_advance interval is reversed");
    if (dt <= 0.0) fail(ErrorKind::InvalidArgument, "max_advance step must be positive");
    const auto steps = static_cast<std::size_t>(std::ceil((b - a) / dt - 1e-9));
    double best = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = (k == steps) ? b : a + static_cast<double>(k) * dt;
        for (int j = 0; j < num_terms(); ++j) best = std::max(best, advance(j, t));
    }
    return best;
}

void validate_horizon(const AdvancedSystem& sys, const Horizon& hz) {
    if (hz.dt <= 0.0) fail(ErrorKind::InvalidArgument, "dt must be positive");
    if (hz.T < sys.t0()) fail(ErrorKind::InvalidArgument, "horizon T precedes t0");
    if (hz.lookahead_depth < 0) fail(ErrorKind::InvalidArgument, "lookahead depth is negative");
    const double ratio = (hz.T - sys.t0()) / hz.dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-6) {
        fail(ErrorKind::InvalidArgument, "(T - t0)/dt must be an integer, got " + format_double(ratio));
    }
}

double extended_horizon(const AdvancedSystem& sys, const Horizon& hz) {
    validate_horizon(sys, hz);
    const int m = hz.lookahead_depth;
    if (m == 0 || hz.T == sys.t0()) {
        // Still sample the reporting window so a negative advance surfaces.
        if (hz.T > sys.t0()) sys.max_advance(sys.t0(), hz.T, hz.dt);
        return hz.T;
    }
    double h_max = sys.max_advance(sys.t0(), hz.T, hz.dt);
    for (int i = 1; i < m; ++i) {
        h_max = sys.max_advance(sys.t0(), hz.T + (m - 1) * h_max, hz.dt);
    }
    return hz.T + m * h_max;
}

}  // namespace advecta
