#include "advecta/transition.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "advecta/errors.hpp"
#include "advecta/numfmt.hpp"

namespace advecta {

namespace {
constexpr double kBlowUpGuard = 1e12;
constexpr double kInverseResidual = 1e-8;
}

TransitionGrid TransitionGrid::build(const AdvancedSystem& sys, const Horizon& hz) {
    const double t_ext = extended_horizon(sys, hz);

    TransitionGrid g;
    g.n_ = sys.dim();
    g.t0_ = sys.t0();
    g.dt_ = hz.dt;
    g.T_ = hz.T;
    g.horizon_ = hz;
    g.report_end_ = static_cast<std::size_t>(std::llround((hz.T - sys.t0()) / hz.dt));

    const auto steps = static_cast<std::size_t>(std::ceil((t_ext - sys.t0()) / hz.dt - 1e-9));
    g.phi_.reserve(steps + 1);
    g.phi_.push_back(Matrix::identity(g.n_));

    const double dt = hz.dt;
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = g.time(k);
        const Matrix d0 = sys.drift(t);
        const Matrix dh = sys.drift(t + 0.5 * dt);
        const Matrix d1 = sys.drift(t + dt);

        const Matrix& y = g.phi_.back();
        const Matrix k1 = d0 * y;
        const Matrix k2 = dh * (y + k1 * (0.5 * dt));
        const Matrix k3 = dh * (y + k2 * (0.5 * dt));
        const Matrix k4 = d1 * (y + k3 * dt);

        Matrix next = y + (k1 + (k2 + k3) * 2.0 + k4) * (dt / 6.0);
        if (mat_inf_norm(next) > kBlowUpGuard) {
            fail(ErrorKind::Overflow,
                 "fundamental matrix norm exceeded " + format_double(kBlowUpGuard) + " at t=" +
                     format_double(t + dt));
        }
        g.phi_.push_back(std::move(next));
    }

    g.phi_inv_.reserve(g.phi_.size());
    for (std::size_t k = 0; k < g.phi_.size(); ++k) {
        Matrix inv = mat_inverse(g.phi_[k]);
        const Matrix residual = g.phi_[k] * inv - Matrix::identity(g.n_);
        if (mat_inf_norm(residual) > kInverseResidual) {
            fail(ErrorKind::SingularMatrix,
                 "inverse residual " + format_double(mat_inf_norm(residual)) +
                     " at grid index " + std::to_string(k) + "; reduce dt");
        }
        g.phi_inv_.push_back(std::move(inv));
    }
    return g;
}

std::size_t TransitionGrid::index_of(double t) const {
    const double rel = (t - t0_) / dt_;
    const auto k = std::llround(rel);
    if (k < 0 || k >= static_cast<long long>(size())) {
        fail(ErrorKind::OutOfDomain,
             "t=" + format_double(t) + " outside [" + format_double(t0_) + ", " +
                 format_double(extended_end()) + "]");
    }
    if (std::abs(rel - static_cast<double>(k)) > 0.5 + 1e-9) {
        fail(ErrorKind::OffGrid, "t=" + format_double(t) + " is not within dt/2 of a grid point");
    }
    return static_cast<std::size_t>(k);
}

Matrix TransitionGrid::between(double t, double s) const {
    return between_indices(index_of(t), index_of(s));
}

Matrix TransitionGrid::between_indices(std::size_t it, std::size_t is) const {
    if (it >= size() || is >= size()) fail(ErrorKind::OutOfDomain, "transition index beyond grid");
    if (it == is) return Matrix::identity(n_);
    return phi_[it] * phi_inv_[is];
}

double TransitionGrid::chapman_kolmogorov_defect(double t, double s, double r) const {
    const Matrix lhs = between(t, s) * between(s, r);
    return mat_inf_norm(lhs - between(t, r));
}

void TransitionGrid::write_csv(std::ostream& out) const {
    out << 't';
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            out << ",phi_" << (i + 1) << '_' << (j + 1);
        }
    }
    out << '\n';
    for (std::size_t k = 0; k < size(); ++k) {
        out << format_double(time(k));
        for (double v : phi_[k].entries()) out << ',' << format_double(v);
        out << '\n';
    }
}

}  // namespace advecta
