#include "advecta/fixedpoint.hpp"

#include <cmath>
#include <utility>

#include "advecta/errors.hpp"

namespace advecta {

namespace {

// Relative slack when deciding whether h/dt is an integer (grid-aligned
// inner samples).
constexpr double kAlignTolerance = 1e-9;

void eval_E_into(const AdvancedSystem& sys, const Trajectory& x, double u, Matrix& coeff,
                 Vector& read, Vector& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (int j = 0; j < sys.num_terms(); ++j) {
        const double h = sys.advance(j, u);
        x.value(u + h, read);
        sys.coefficient(j, u, coeff);
        for (int r = 0; r < sys.dim(); ++r) {
            double acc = 0.0;
            for (int c = 0; c < sys.dim(); ++c) acc += coeff(r, c) * read[static_cast<std::size_t>(c)];
            out[static_cast<std::size_t>(r)] += acc;
        }
    }
}

// Lazily filled E_x values at grid-aligned sample times t0 + i*dt. Indexes
// may run past the trajectory grid (the extension policy covers the reads).
class EGridCache {
public:
    EGridCache(const AdvancedSystem& sys, const Trajectory& x)
        : sys_(sys), x_(x), n_(static_cast<std::size_t>(sys.dim())),
          coeff_(sys.dim()), read_(n_), computed_(x.size() + 64, 0),
          data_((x.size() + 64) * n_) {}

    /// Grow the backing storage up front; spans handed out by get() stay
    /// valid only until the next ensure().
    void ensure(std::size_t max_index) {
        if (max_index < computed_.size()) return;
        const std::size_t want = (max_index + 1) * 2;
        computed_.resize(want, 0);
        data_.resize(want * n_, 0.0);
    }

    std::span<const double> get(std::size_t i) {
        ensure(i);
        if (!computed_[i]) {
            const double u = x_.t0() + static_cast<double>(i) * x_.dt();
            Vector out(n_);
            eval_E_into(sys_, x_, u, coeff_, read_, out);
            std::copy(out.begin(), out.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * n_));
            computed_[i] = 1;
        }
        return {data_.data() + i * n_, n_};
    }

private:

    const AdvancedSystem& sys_;
    const Trajectory& x_;
    std::size_t n_;
    Matrix coeff_;
    Vector read_;
    std::vector<char> computed_;
    std::vector<double> data_;
};

// int_s^{s+h} E_x(u) du at grid point index i (s = t0 + i*dt), composite
// trapezoid. Aligned advances reuse cached grid samples.
void inner_integral(const AdvancedSystem& sys, const Trajectory& x, EGridCache& cache,
                    std::size_t i, double h, Vector& out, Matrix& coeff, Vector& read,
                    Vector& sample) {
    const std::size_t n = out.size();
    std::fill(out.begin(), out.end(), 0.0);
    if (h <= 0.0) return;

    const double dt = x.dt();
    const double ratio = h / dt;
    const double rounded = std::round(ratio);
    const bool aligned = rounded >= 1.0 && std::abs(ratio - rounded) <= kAlignTolerance * std::max(1.0, ratio);

    if (aligned) {
        const auto m = static_cast<std::size_t>(rounded);
        cache.ensure(i + m);  // keep every span below valid
        auto first = cache.get(i);
        auto last = cache.get(i + m);
        for (std::size_t c = 0; c < n; ++c) out[c] = 0.5 * (first[c] + last[c]);
        for (std::size_t l = 1; l < m; ++l) {
            auto mid = cache.get(i + l);
            for (std::size_t c = 0; c < n; ++c) out[c] += mid[c];
        }
        for (std::size_t c = 0; c < n; ++c) out[c] *= dt;
        return;
    }

    const auto m = static_cast<std::size_t>(std::ceil(ratio - kAlignTolerance));
    const double step = h / static_cast<double>(m);
    const double s = x.t0() + static_cast<double>(i) * dt;

    auto first = cache.get(i);  // u = s is grid-aligned by construction
    eval_E_into(sys, x, s + h, coeff, read, sample);
    for (std::size_t c = 0; c < n; ++c) out[c] = 0.5 * (first[c] + sample[c]);
    for (std::size_t l = 1; l < m; ++l) {
        eval_E_into(sys, x, s + static_cast<double>(l) * step, coeff, read, sample);
        for (std::size_t c = 0; c < n; ++c) out[c] += sample[c];
    }
    for (std::size_t c = 0; c < n; ++c) out[c] *= step;
}

}  // namespace

Vector eval_E(const AdvancedSystem& sys, const Trajectory& x, double u) {
    Matrix coeff(sys.dim());
    Vector read(static_cast<std::size_t>(sys.dim()));
    Vector out(static_cast<std::size_t>(sys.dim()));
    eval_E_into(sys, x, u, coeff, read, out);
    return out;
}

Trajectory apply_H(const AdvancedSystem& sys, const TransitionGrid& grid, const Trajectory& x,
                   const Vector& x0) {
    const int n = sys.dim();
    const std::size_t points = grid.size();
    if (x.size() != points || x.dim() != n) {
        fail(ErrorKind::InvalidArgument, "trajectory does not match the transition grid");
    }
    if (x0.size() != static_cast<std::size_t>(n)) {
        fail(ErrorKind::InvalidArgument, "initial value dimension mismatch");
    }

    Trajectory out(grid.t0(), grid.dt(), points, n, x.policy());
    std::copy(x0.begin(), x0.end(), out.at(0).begin());
    if (points == 1) return out;

    EGridCache cache(sys, x);
    Matrix coeff(n);
    Vector read(static_cast<std::size_t>(n));
    Vector sample(static_cast<std::size_t>(n));
    Vector g(static_cast<std::size_t>(n));

    const double dt = grid.dt();
    Vector accum(static_cast<std::size_t>(n), 0.0);  // int_{t0}^{t_k} Phi(t0,s) w(s) ds
    Vector w(static_cast<std::size_t>(n));
    Vector q_prev(static_cast<std::size_t>(n));
    Vector q_curr(static_cast<std::size_t>(n));
    Vector shifted(static_cast<std::size_t>(n));

    // w(s) = sum_j A_j(s) * inner_j(s); q(s) = Phi(t0,s) w(s). The outer
    // integral then factors as Phi(t_k,t0) * accum, so one pass over the
    // grid serves every t_k.
    auto eval_w = [&](std::size_t k) {
        std::fill(w.begin(), w.end(), 0.0);
        const double s = grid.time(k);
        for (int j = 0; j < sys.num_terms(); ++j) {
            const double h = sys.advance(j, s);
            inner_integral(sys, x, cache, k, h, g, coeff, read, sample);
            sys.coefficient(j, s, coeff);
            for (int r = 0; r < n; ++r) {
                double acc = 0.0;
                for (int c = 0; c < n; ++c) acc += coeff(r, c) * g[static_cast<std::size_t>(c)];
                w[static_cast<std::size_t>(r)] += acc;
            }
        }
    };

    eval_w(0);
    grid.phi_inverse(0).apply(w, q_prev);
    for (std::size_t k = 1; k < points; ++k) {
        eval_w(k);
        grid.phi_inverse(k).apply(w, q_curr);
        for (std::size_t c = 0; c < accum.size(); ++c) {
            accum[c] += 0.5 * dt * (q_prev[c] + q_curr[c]);
        }
        std::swap(q_prev, q_curr);

        for (std::size_t c = 0; c < accum.size(); ++c) shifted[c] = x0[c] + accum[c];
        grid.phi(k).apply(shifted, out.at(k));
    }
    return out;
}

IterationResult picard_solve(const AdvancedSystem& sys, const TransitionGrid& grid,
                             const Vector& x0, double tol, int max_iter) {
    if (tol <= 0.0) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
    if (max_iter < 1) fail(ErrorKind::InvalidArgument, "max_iter must be at least 1");

    const int n = sys.dim();
    Trajectory x(grid.t0(), grid.dt(), grid.size(), n, grid.horizon().extension);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        grid.phi(k).apply(x0, x.at(k));
    }

    IterationResult result{std::move(x), {}, {}, false, 0};
    const std::size_t report_end = grid.report_end_index();

    for (int iter = 0; iter < max_iter; ++iter) {
        Trajectory next = apply_H(sys, grid, result.trajectory, x0);
        double res = 0.0;
        for (std::size_t k = 0; k <= report_end; ++k) {
            auto a = next.at(k);
            auto b = result.trajectory.at(k);
            for (std::size_t c = 0; c < a.size(); ++c) {
                res = std::max(res, std::abs(a[c] - b[c]));
            }
        }
        if (!result.residuals.empty() && result.residuals.back() > 0.0) {
            result.ratios.push_back(res / result.residuals.back());
        }
        result.residuals.push_back(res);
        result.trajectory = std::move(next);
        result.iterations = iter + 1;
        if (res <= tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

double ode_defect(const AdvancedSystem& sys, const Trajectory& x, std::size_t report_end) {
    if (report_end + 1 > x.size()) fail(ErrorKind::InvalidArgument, "report window beyond trajectory");
    if (report_end < 2) return 0.0;

    const int n = sys.dim();
    Matrix coeff(n);
    Vector read(static_cast<std::size_t>(n));
    Vector residual(static_cast<std::size_t>(n));
    const double dt = x.dt();

    double worst = 0.0;
    for (std::size_t k = 1; k < report_end; ++k) {
        auto fwd = x.at(k + 1);
        auto bwd = x.at(k - 1);
        for (int c = 0; c < n; ++c) {
            residual[static_cast<std::size_t>(c)] =
                (fwd[static_cast<std::size_t>(c)] - bwd[static_cast<std::size_t>(c)]) / (2.0 * dt);
        }
        const double t = x.t0() + static_cast<double>(k) * dt;
        for (int j = 0; j < sys.num_terms(); ++j) {
            const double h = sys.advance(j, t);
            x.value(t + h, read);
            sys.coefficient(j, t, coeff);
            for (int r = 0; r < n; ++r) {
                double acc = 0.0;
                for (int c = 0; c < n; ++c) acc += coeff(r, c) * read[static_cast<std::size_t>(c)];
                residual[static_cast<std::size_t>(r)] += acc;
            }
        }
        worst = std::max(worst, vec_inf_norm(residual));
    }
    return worst;
}

}  // namespace advecta
