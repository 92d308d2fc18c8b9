#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "advecta/matrix.hpp"
#include "advecta/system.hpp"

namespace advecta {

/// Sampled vector function on the uniform grid t0, t0+dt, ..., T_ext.
/// Evaluation between grid points interpolates linearly; evaluation past the
/// grid follows the extension policy.
class Trajectory {
public:
    Trajectory(double t0, double dt, std::size_t points, int dim, ExtensionPolicy policy)
        : t0_(t0), dt_(dt), n_(dim), policy_(policy),
          data_(points * static_cast<std::size_t>(dim), 0.0), points_(points) {}

    double t0() const { return t0_; }
    double dt() const { return dt_; }
    int dim() const { return n_; }
    std::size_t size() const { return points_; }
    ExtensionPolicy policy() const { return policy_; }
    double end_time() const { return t0_ + static_cast<double>(points_ - 1) * dt_; }

    std::span<double> at(std::size_t k) {
        return {data_.data() + k * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
    }
    std::span<const double> at(std::size_t k) const {
        return {data_.data() + k * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
    }

    /// x(t) by interpolation/extension. Throws OutOfDomain for t < t0.
    void value(double t, std::span<double> out) const;
    Vector value(double t) const;

    /// max over grid points k <= end_index of |x(t_k)|_inf
    double sup_norm(std::size_t end_index) const;
    double sup_norm() const { return sup_norm(points_ - 1); }

    /// CSV: header "t,x_1,...,x_n", one row per grid point up to end_index.
    void write_csv(std::ostream& out, std::size_t end_index) const;

    bool same_geometry(const Trajectory& other) const {
        return t0_ == other.t0_ && dt_ == other.dt_ && n_ == other.n_ && points_ == other.points_;
    }

private:
    double t0_;
    double dt_;
    int n_;
    ExtensionPolicy policy_;
    std::vector<double> data_;
    std::size_t points_;
};

}  // namespace advecta
