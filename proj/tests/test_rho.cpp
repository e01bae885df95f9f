#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "weyl/rho.hpp"

using namespace weyl;

namespace {

RhoOptions quad_mode() {
    RhoOptions opt;
    opt.mode = RhoMode::quadrature;
    return opt;
}

} // namespace

TEST_CASE("rho(0,0) is the identity in both modes") {
    for (RhoOptions opt : {RhoOptions{}, quad_mode()}) {
        Eigen::MatrixXcd A = rho_matrix_1d(0.0, 0.0, 32, opt);
        CHECK((A - Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-14);
    }
    BasisTruncation t2{2, 6};
    OperatorMatrix A2 = rho_matrix(PhasePoint{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()}, t2);
    CHECK((A2.m - Eigen::MatrixXcd::Identity(36, 36)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("ground-state matrix element against the Gaussian overlap") {
    // <rho(x,0) h_0, h_0> = e^{-x^2/4} and <rho(0,y) h_0, h_0> = e^{-pi^2 y^2}.
    for (RhoOptions opt : {RhoOptions{}, quad_mode()}) {
        Eigen::MatrixXcd A = rho_matrix_1d(1.0, 0.0, 8, opt);
        CHECK(std::abs(A(0, 0) - cplx(std::exp(-0.25), 0.0)) < 1e-12);
        Eigen::MatrixXcd B = rho_matrix_1d(0.0, 0.2, 8, opt);
        CHECK(std::abs(B(0, 0) - cplx(std::exp(-M_PI * M_PI * 0.04), 0.0)) < 1e-12);
    }
}

TEST_CASE("laguerre and quadrature paths agree") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    RhoOptions lag;
    RhoOptions quad = quad_mode();
    for (int trial = 0; trial < 25; ++trial) {
        double x = u(rng), y = u(rng);
        Eigen::MatrixXcd A = rho_matrix_1d(x, y, 24, lag);
        Eigen::MatrixXcd B = rho_matrix_1d(x, y, 24, quad);
        CHECK((A - B).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("adjoint symmetry is exact in laguerre mode") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
        double x = u(rng), y = u(rng);
        Eigen::MatrixXcd A = rho_matrix_1d(x, y, 16);
        Eigen::MatrixXcd B = rho_matrix_1d(-x, -y, 16);
        CHECK((B - A.adjoint()).norm() == 0.0);
    }
}

TEST_CASE("rows and columns are near-unit vectors at moderate N") {
    // rho is unitary on L^2, so truncated columns have norm <= 1, close to 1
    // once N covers the translate.
    Eigen::MatrixXcd A = rho_matrix_1d(1.0, 0.5, 64);
    for (int k = 0; k < 16; ++k) {
        double nrm = A.col(k).norm();
        CHECK(nrm < 1.0 + 1e-12);
        CHECK(nrm > 1.0 - 1e-10);
    }
}

TEST_CASE("tensor factorization for n=2") {
    Eigen::Vector2d x, y;
    x << 1.0, 0.0;
    y << 0.0, 0.0;
    OperatorMatrix A = rho_matrix(PhasePoint{x, y}, BasisTruncation{2, 3});
    // Slot 0 is (0,0): the entry is the 1-d ground-state overlap in the
    // first coordinate times 1 in the second.
    CHECK(std::abs(A.m(0, 0) - cplx(std::exp(-0.25), 0.0)) < 1e-13);
    // Graded slot 1 is (0,1): rho acts as the identity on the second
    // coordinate, so the element equals the (0,0) one.
    CHECK(std::abs(A.m(1, 1) - A.m(0, 0)) < 1e-15);

    Eigen::MatrixXcd A1 = rho_matrix_1d(1.0, 0.0, 3);
    // (1,0) x (1,0) entry: slot 2 in graded order.
    CHECK(std::abs(A.m(2, 2) - A1(1, 1)) < 1e-15);
}

TEST_CASE("n=1 wrapper matches the 1-d routine") {
    OperatorMatrix A = rho_matrix(PhasePoint(0.7, -0.3), BasisTruncation{1, 12});
    Eigen::MatrixXcd B = rho_matrix_1d(0.7, -0.3, 12);
    CHECK((A.m - B).norm() == 0.0);
}

TEST_CASE("laguerre column base cases") {
    // l_0^{(0)}(xi) = e^{-xi/2}; at xi = 0, l_k^{(d)} = delta_{d,0} ... with
    // the xi^{d/2} factor killing every d > 0 column.
    std::vector<double> l0 = laguerre_column(0, 1.3, 4);
    CHECK(l0[0] == doctest::Approx(std::exp(-0.65)).epsilon(1e-14));
    std::vector<double> z = laguerre_column(2, 0.0, 4);
    for (double v : z) CHECK(v == 0.0);
    std::vector<double> d0 = laguerre_column(0, 0.0, 4);
    for (double v : d0) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(rho_matrix_1d(std::numeric_limits<double>::quiet_NaN(), 0.0, 8), NumericError);
    CHECK_THROWS_AS(rho_matrix_1d(17.0, 0.0, 8), NumericError);
    CHECK_THROWS_AS(rho_matrix_1d(1.0, 0.0, 0), ConfigError);
    RhoOptions opt = quad_mode();
    opt.quad_order = 16;
    // Forcing a tiny fixed order at large |y| must trip the doubling check.
    CHECK_THROWS_WITH_AS(rho_matrix_1d(0.0, 3.0, 32, opt),
                         doctest::Contains("order"), NumericError);
}
