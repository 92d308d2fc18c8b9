#include "advecta/matrix.hpp"

#include <cmath>
#include <cstdlib>

#include "advecta/numfmt.hpp"

namespace advecta {

namespace {
constexpr double kPivotTolerance = 1e-12;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= rhs.a_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : a_) v *= s;
    return *this;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    Matrix out(n_);
    for (int i = 0; i < n_; ++i) {
        for (int k = 0; k < n_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n_; ++j) out(i, j) += aik * rhs(k, j);
        }
    }
    return out;
}

Vector Matrix::apply(const Vector& x) const {
    Vector y(static_cast<std::size_t>(n_), 0.0);
    apply(x, y);
    return y;
}

void Matrix::apply(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n_; ++j) acc += (*this)(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = acc;
    }
}

double vec_inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double mat_inf_norm(const Matrix& m) {
    double best = 0.0;
    for (int i = 0; i < m.size(); ++i) {
        double row = 0.0;
        for (int j = 0; j < m.size(); ++j) row += std::abs(m(i, j));
        best = std::max(best, row);
    }
    return best;
}

Matrix mat_inverse(const Matrix& m) {
    const int n = m.size();
    Matrix lu = m;
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;

    for (int col = 0; col < n; ++col) {
        int pivot_row = col;
        double pivot_mag = std::abs(lu(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double mag = std::abs(lu(r, col));
            if (mag > pivot_mag) {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        if (pivot_mag < kPivotTolerance) {
            fail(ErrorKind::SingularMatrix,
                 "pivot " + format_double(pivot_mag) + " below tolerance at column " +
                     std::to_string(col));
        }
        if (pivot_row != col) {
            for (int j = 0; j < n; ++j) std::swap(lu(col, j), lu(pivot_row, j));
            std::swap(perm[static_cast<std::size_t>(col)], perm[static_cast<std::size_t>(pivot_row)]);
        }
        const double inv_pivot = 1.0 / lu(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = lu(r, col) * inv_pivot;
            lu(r, col) = f;
            for (int j = col + 1; j < n; ++j) lu(r, j) -= f * lu(col, j);
        }
    }

    // Solve LU x = e_{perm} column by column.
    Matrix inv(n);
    Vector work(static_cast<std::size_t>(n));
    for (int col = 0; col < n; ++col) {
        for (int i = 0; i < n; ++i)
            work[static_cast<std::size_t>(i)] = (perm[static_cast<std::size_t>(i)] == col) ? 1.0 : 0.0;
        for (int i = 1; i < n; ++i) {
            double acc = work[static_cast<std::size_t>(i)];
            for (int j = 0; j < i; ++j) acc -= lu(i, j) * work[static_cast<std::size_t>(j)];
            work[static_cast<std::size_t>(i)] = acc;
        }
        for (int i = n - 1; i >= 0; --i) {
            double acc = work[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < n; ++j) acc -= lu(i, j) * work[static_cast<std::size_t>(j)];
            work[static_cast<std::size_t>(i)] = acc / lu(i, i);
        }
        for (int i = 0; i < n; ++i) inv(i, col) = work[static_cast<std::size_t>(i)];
    }
    return inv;
}

Matrix mat_exp(const Matrix& m, double t) {
    const int n = m.size();
    Matrix x = m;
    x *= t;

    // Halve until the scaled norm is comfortable for the series, then square back.
    int squarings = 0;
    double norm = mat_inf_norm(x);
    while (norm > 0.5 && squarings < 64) {
        x *= 0.5;
        norm *= 0.5;
        ++squarings;
    }

    Matrix acc = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (int k = 1; k <= 13; ++k) {
        term = term * x;
        term *= 1.0 / k;
        acc += term;
    }
    for (int s = 0; s < squarings; ++s) acc = acc * acc;
    return acc;
}

}  // namespace advecta
