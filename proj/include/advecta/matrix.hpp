#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "advecta/errors.hpp"

namespace advecta {

using Vector = std::vector<double>;

/// Dense square real matrix, row-major. Dimensions stay small (state
/// dimension of the differential system), so there are no sparse or
/// blocked paths.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

    static Matrix identity(int n) {
        Matrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int size() const { return n_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    std::span<const double> entries() const { return a_; }
    std::span<double> entries() { return a_; }

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double s);

    friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
    friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
    friend Matrix operator*(Matrix lhs, double s) { return lhs *= s; }
    friend Matrix operator*(double s, Matrix rhs) { return rhs *= s; }

    Matrix operator*(const Matrix& rhs) const;

    /// y = M x
    Vector apply(const Vector& x) const;
    void apply(std::span<const double> x, std::span<double> y) const;

private:
    int n_ = 0;
    std::vector<double> a_;
};

/// max_i |v_i|
double vec_inf_norm(std::span<const double> v);

/// Induced infinity norm: max absolute row sum.
double mat_inf_norm(const Matrix& m);

/// Inverse via LU with partial pivoting. Throws SingularMatrix when a pivot
/// magnitude drops below 1e-12.
Matrix mat_inverse(const Matrix& m);

/// e^{tM} by scaling-and-squaring with a truncated series kernel.
Matrix mat_exp(const Matrix& m, double t);

}  // namespace advecta
