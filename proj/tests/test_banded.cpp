#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gkdv/banded.hpp"
#include "gkdv/stepper.hpp"
#include "test_helpers.hpp"

using namespace gkdv;

TEST_CASE("fd_weights reproduces the classic centered stencils") {
    const double h = 0.25;
    std::vector<double> x = {-h, 0.0, h};
    auto w = fd_weights(0.0, x, 2);
    CHECK(w[0] == Catch::Approx(1.0 / (h * h)));
    CHECK(w[1] == Catch::Approx(-2.0 / (h * h)));
    CHECK(w[2] == Catch::Approx(1.0 / (h * h)));

    auto w1 = fd_weights(0.0, x, 1);
    CHECK(w1[0] == Catch::Approx(-0.5 / h));
    CHECK(w1[1] == Catch::Approx(0.0).margin(1e-14));
    CHECK(w1[2] == Catch::Approx(0.5 / h));
}

TEST_CASE("identity band solve returns the right-hand side") {
    const int n = 7;
    BandedMatrix A(n, 1, 1);
    for (int i = 0; i < n; ++i) A.at(i, i) = 1.0;
    std::vector<double> b = {1, -2, 3, 0.5, 9, -1, 4};
    auto x = banded_solve(A, b);
    for (int i = 0; i < n; ++i) CHECK(x[i] == Catch::Approx(b[i]));
}

TEST_CASE("tridiagonal Toeplitz {-1,2,-1} with unit right-hand side") {
    const int n = 5;
    BandedMatrix A(n, 1, 1);
    for (int i = 0; i < n; ++i) {
        A.at(i, i) = 2.0;
        if (i > 0) A.at(i, i - 1) = -1.0;
        if (i < n - 1) A.at(i, i + 1) = -1.0;
    }
    std::vector<double> b(n, 1.0);
    auto x = banded_solve(A, b);
    // frozen from the dense 5x5 oracle
    const double expected[5] = {2.5, 4.0, 4.5, 4.0, 2.5};
    for (int i = 0; i < n; ++i) CHECK(x[i] == Catch::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("banded LU matches a dense oracle on random well-conditioned systems") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 12 + trial;
        const int kl = 1 + trial % 4, ku = 1 + (trial / 2) % 4;
        BandedMatrix A(n, kl, ku);
        std::vector<std::vector<double>> D(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i)
            for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
                double v = U(rng);
                if (i == j) v += 4.0;
                A.at(i, j) = v;
                D[i][j] = v;
            }
        std::vector<double> b(n);
        for (auto& v : b) v = U(rng);
        auto x = banded_solve(A, b);
        auto xd = gkdv_test::dense_solve(D, b);
        double bmax = 0.0;
        for (double v : b) bmax = std::max(bmax, std::fabs(v));
        // residual contract
        std::vector<double> r(n);
        A.apply(x, r);
        for (int i = 0; i < n; ++i) {
            CHECK(x[i] == Catch::Approx(xd[i]).margin(1e-10));
            CHECK(std::fabs(r[i] - b[i]) <= 1e-10 * bmax);
        }
    }
}

TEST_CASE("pivoting handles a zero diagonal") {
    const int n = 4;
    BandedMatrix A(n, 1, 1);
    A.at(0, 0) = 0.0;
    A.at(0, 1) = 1.0;
    A.at(1, 0) = 1.0;
    A.at(1, 1) = 0.0;
    A.at(1, 2) = 1.0;
    A.at(2, 1) = 1.0;
    A.at(2, 2) = 2.0;
    A.at(2, 3) = 1.0;
    A.at(3, 2) = 1.0;
    A.at(3, 3) = 2.0;
    std::vector<double> b = {1, 2, 3, 4};
    auto x = banded_solve(A, b);
    std::vector<double> r(n);
    A.apply(x, r);
    for (int i = 0; i < n; ++i) CHECK(r[i] == Catch::Approx(b[i]).margin(1e-12));
}

TEST_CASE("a zero row raises a singular-pivot error with the row index") {
    const int n = 5;
    BandedMatrix A(n, 1, 1);
    for (int i = 0; i < n; ++i)
        if (i != 2) A.at(i, i) = 1.0;
    std::vector<double> b(n, 1.0);
    try {
        banded_solve(A, b);
        FAIL("expected LinearAlgebraError");
    } catch (const LinearAlgebraError& e) {
        CHECK(e.row_index == 2);
    }
}
