#pragma once

#include <random>
#include <vector>

#include "advecta/expr.hpp"
#include "advecta/matrix.hpp"
#include "advecta/system.hpp"

namespace advecta::testing {

inline std::vector<Expression> constant_entries(const std::vector<double>& values) {
    std::vector<Expression> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(Expression::number(v));
    return out;
}

inline std::vector<Expression> entries_of(const Matrix& m) {
    std::vector<Expression> out;
    out.reserve(m.entries().size());
    for (double v : m.entries()) out.push_back(Expression::number(v));
    return out;
}

/// Scalar two-term system x' + a x(t+h) + b x(t+r) = 0.
inline AdvancedSystem scalar_two_term(double a, double b, double h, double r, double t0 = 0.0) {
    std::vector<Term> terms;
    terms.push_back(Term{constant_entries({a}), Expression::number(h)});
    terms.push_back(Term{constant_entries({b}), Expression::number(r)});
    return AdvancedSystem(1, t0, std::move(terms));
}

/// Single zero-advance term A = -D, so the drift equals D and the advanced
/// system collapses to the plain linear ODE y' = D y.
inline AdvancedSystem constant_drift_system(const Matrix& d, double t0 = 0.0) {
    Matrix a(d.size());
    a -= d;
    std::vector<Term> terms;
    terms.push_back(Term{entries_of(a), Expression::number(0.0)});
    return AdvancedSystem(d.size(), t0, std::move(terms));
}

inline Matrix random_matrix(std::mt19937& rng, int n, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Matrix m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = dist(rng);
    }
    return m;
}

inline Vector random_vector(std::mt19937& rng, int n, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Vector v(static_cast<std::size_t>(n));
    for (double& x : v) x = dist(rng);
    return v;
}

}  // namespace advecta::testing
