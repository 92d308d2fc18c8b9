#include <doctest.h>

#include <cmath>
#include <random>

#include "advecta/matrix.hpp"
#include "support/builders.hpp"

using namespace advecta;
using advecta::testing::random_matrix;

TEST_SUITE("matrix") {

TEST_CASE("vec_inf_norm definition") {
    CHECK(vec_inf_norm(Vector{0.0, 0.0, 0.0}) == 0.0);
    CHECK(vec_inf_norm(Vector{1.0, -3.0, 2.0}) == 3.0);
}

TEST_CASE("vec_inf_norm matches elementwise scan") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        Vector v(7);
        for (double& x : v) x = dist(rng);
        double expect = 0.0;
        for (double x : v) {
            if (std::abs(x) > expect) expect = std::abs(x);
        }
        CHECK(vec_inf_norm(v) == expect);
    }
}

TEST_CASE("mat_inf_norm definition") {
    CHECK(mat_inf_norm(Matrix::identity(3)) == 1.0);

    Matrix m(2);
    m(0, 0) = 1.0;
    m(0, 1) = -2.0;
    m(1, 0) = 3.0;
    m(1, 1) = 4.0;
    CHECK(mat_inf_norm(m) == 7.0);
}

TEST_CASE("mat_inf_norm matches row-sum scan") {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix m = random_matrix(rng, 5, 4.0);
        double expect = 0.0;
        for (int i = 0; i < 5; ++i) {
            double row = 0.0;
            for (int j = 0; j < 5; ++j) row += std::abs(m(i, j));
            expect = std::max(expect, row);
        }
        CHECK(mat_inf_norm(m) == expect);
    }
}

TEST_CASE("mat_inf_norm is sub-multiplicative") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix a = random_matrix(rng, 4, 2.0);
        const Matrix b = random_matrix(rng, 4, 2.0);
        CHECK(mat_inf_norm(a * b) <= mat_inf_norm(a) * mat_inf_norm(b) * (1.0 + 1e-12));
    }
}

TEST_CASE("mat_inverse of identity and diagonal") {
    const Matrix inv_id = mat_inverse(Matrix::identity(3));
    CHECK(mat_inf_norm(inv_id - Matrix::identity(3)) == 0.0);

    Matrix d(2);
    d(0, 0) = 2.0;
    d(1, 1) = 4.0;
    const Matrix inv = mat_inverse(d);
    CHECK(inv(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(inv(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(inv(0, 1) == 0.0);
    CHECK(inv(1, 0) == 0.0);
}

TEST_CASE("mat_inverse residual stays small on well-conditioned matrices") {
    std::mt19937 rng(14);
    for (int trial = 0; trial < 30; ++trial) {
        Matrix m = random_matrix(rng, 4, 1.0);
        for (int i = 0; i < 4; ++i) m(i, i) += 6.0;  // diagonally dominant
        const Matrix inv = mat_inverse(m);
        CHECK(mat_inf_norm(m * inv - Matrix::identity(4)) <= 1e-10);
    }
}

TEST_CASE("mat_inverse rejects singular input") {
    Matrix m(2);
    m(0, 0) = 1.0;
    m(0, 1) = 2.0;
    m(1, 0) = 2.0;
    m(1, 1) = 4.0;
    CHECK_THROWS_AS(mat_inverse(m), Error);
    try {
        mat_inverse(m);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularMatrix);
    }
}

TEST_CASE("mat_exp at t=0 is the identity") {
    std::mt19937 rng(15);
    const Matrix m = random_matrix(rng, 3, 5.0);
    CHECK(mat_inf_norm(mat_exp(m, 0.0) - Matrix::identity(3)) <= 1e-15);
}

TEST_CASE("mat_exp of a nilpotent matrix terminates the series") {
    Matrix m(2);
    m(0, 1) = 1.0;
    for (double t : {0.25, 1.0, -3.0}) {
        const Matrix e = mat_exp(m, t);
        CHECK(e(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(e(0, 1) == doctest::Approx(t).epsilon(1e-14));
        CHECK(e(1, 0) == 0.0);
        CHECK(e(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("mat_exp of a diagonal matrix") {
    Matrix m(2);
    m(0, 0) = 0.7;
    m(1, 1) = -1.3;
    const Matrix e = mat_exp(m, 2.0);
    CHECK(e(0, 0) == doctest::Approx(std::exp(1.4)).epsilon(1e-12));
    CHECK(e(1, 1) == doctest::Approx(std::exp(-2.6)).epsilon(1e-12));
    CHECK(std::abs(e(0, 1)) <= 1e-15);
    CHECK(std::abs(e(1, 0)) <= 1e-15);
}

TEST_CASE("mat_exp semigroup property") {
    std::mt19937 rng(16);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix m = random_matrix(rng, 3, 1.0);
        if (mat_inf_norm(m) > 2.0) m *= 2.0 / mat_inf_norm(m);
        const double s = dist(rng);
        const double t = dist(rng);
        const Matrix lhs = mat_exp(m, s + t);
        const Matrix rhs = mat_exp(m, s) * mat_exp(m, t);
        CHECK(mat_inf_norm(lhs - rhs) <= 1e-8);
    }
}

TEST_CASE("mat_exp inverse is the exponential of the negation") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix m = random_matrix(rng, 3, 1.0);
        if (mat_inf_norm(m) > 2.0) m *= 2.0 / mat_inf_norm(m);
        const Matrix inv = mat_inverse(mat_exp(m, 0.8));
        CHECK(mat_inf_norm(inv - mat_exp(m, -0.8)) <= 1e-8);
    }
}

}  // TEST_SUITE
