#include "advecta/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "advecta/errors.hpp"
#include "advecta/numfmt.hpp"

namespace advecta {

void Trajectory::value(double t, std::span<double> out) const {
    const double rel = (t - t0_) / dt_;
    if (rel < -1e-9) {
        fail(ErrorKind::OutOfDomain, "trajectory queried at t=" + format_double(t) + " before t0");
    }
    const double last = static_cast<double>(points_ - 1);
    if (rel >= last) {
        if (rel <= last + 1e-9) {
            auto v = at(points_ - 1);
            std::copy(v.begin(), v.end(), out.begin());
            return;
        }
        if (policy_ == ExtensionPolicy::HoldLastValue) {
            auto v = at(points_ - 1);
            std::copy(v.begin(), v.end(), out.begin());
        } else {
            std::fill(out.begin(), out.end(), 0.0);
        }
        return;
    }
    const double clamped = std::max(rel, 0.0);
    const auto k = static_cast<std::size_t>(clamped);
    const double w = clamped - static_cast<double>(k);
    auto lo = at(k);
    auto hi = at(k + 1);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = lo[i] + w * (hi[i] - lo[i]);
    }
}

Vector Trajectory::value(double t) const {
    Vector out(static_cast<std::size_t>(n_));
    value(t, out);
    return out;
}

double Trajectory::sup_norm(std::size_t end_index) const {
    double best = 0.0;
    for (std::size_t k = 0; k <= end_index && k < points_; ++k) {
        best = std::max(best, vec_inf_norm(at(k)));
    }
    return best;
}

void Trajectory::write_csv(std::ostream& out, std::size_t end_index) const {
    out << 't';
    for (int i = 1; i <= n_; ++i) out << ",x_" << i;
    out << '\n';
    for (std::size_t k = 0; k <= end_index && k < points_; ++k) {
        out << format_double(t0_ + static_cast<double>(k) * dt_);
        for (double v : at(k)) out << ',' << format_double(v);
        out << '\n';
    }
}

}  // namespace advecta
