#include <doctest.h>

#include <cmath>
#include <sstream>

#include "weyl/quadrature.hpp"
#include "weyl/weyl_transform.hpp"

using namespace weyl;
using nlohmann::json;

namespace {

MeasurePtr circle_measure(double r = 1.0) {
    return make_smooth({curve_catalog("circle", {{"r", r}}), density_constant(1.0)});
}

MeasurePtr segment_measure(double half) {
    return make_smooth({curve_catalog("line_segment",
                                      {{"a", {-half, 0.0}}, {"b", {half, 0.0}}}),
                        density_constant(1.0)});
}

} // namespace

TEST_CASE("point masses transform to representation matrices") {
    BasisTruncation t{1, 24};
    PhasePoint p(0.8, -0.6);
    OperatorMatrix W = weyl_matrix(make_dirac(p), t);
    Eigen::MatrixXcd R = rho_matrix(p, t).m;
    CHECK((W.m - R).norm() == 0.0);
}

TEST_CASE("sums combine exactly") {
    BasisTruncation t{1, 16};
    MeasurePtr d = make_dirac(PhasePoint(0.4, 0.9));
    OperatorMatrix Z = weyl_matrix(make_sum({{cplx(1.0), d}, {cplx(-1.0), d}}), t);
    CHECK(Z.m.cwiseAbs().maxCoeff() == 0.0);

    OperatorMatrix S = weyl_matrix(make_sum({{cplx(0.0, 2.0), d}}), t);
    OperatorMatrix D = weyl_matrix(d, t);
    CHECK((S.m - cplx(0.0, 2.0) * D.m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("smooth assembly against a fine independent quadrature") {
    BasisTruncation t{1, 12};
    OperatorMatrix W = weyl_matrix(circle_measure(), t);
    // Re-integrate a few entries with a quadrature 64x finer than the
    // stream default.
    Quad1D fine = composite_gauss_legendre(0.0, 2 * M_PI, 4096, 8);
    Chart circ = curve_catalog("circle", json::object());
    for (auto [j, k] : {std::pair{0, 0}, {3, 1}, {7, 11}}) {
        cplx acc(0.0);
        for (int q = 0; q < fine.nodes.size(); ++q) {
            Eigen::VectorXd u(1);
            u[0] = fine.nodes[q];
            PhasePoint p = circ.eval(u);
            acc += fine.weights[q] * rho_matrix_1d(p.x[0], p.y[0], 12)(j, k);
        }
        CHECK(std::abs(W.m(j, k) - acc) < 1e-10);
    }
}

TEST_CASE("operator norm is bounded by the total mass") {
    BasisTruncation t{1, 48};
    OperatorMatrix W = weyl_matrix(circle_measure(), t);
    Eigen::VectorXd sv = singular_values(W);
    CHECK(sv[0] <= 2 * M_PI + 1e-8);
    for (int i = 1; i < sv.size(); ++i) CHECK(sv[i] <= sv[i - 1] + 1e-14);
}

TEST_CASE("mu nat reflect(mu) is positive semidefinite in product mode") {
    BasisTruncation t{1, 32};
    MeasurePtr c = circle_measure();
    OperatorMatrix A = weyl_matrix(make_tconv({c, make_reflect(c)}), t);
    CHECK((A.m - A.m.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A.m);
    REQUIRE(es.info() == Eigen::Success);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
}

TEST_CASE("singular values are stable under stream refinement") {
    BasisTruncation t{1, 32};
    MeasurePtr e = make_smooth({curve_catalog("ellipse", {{"a", 2.0}, {"b", 1.0}}),
                                density_constant(1.0)});
    WeylOptions fine;
    fine.stream.curve_quad = {128, 8};
    double s_def = singular_values(weyl_matrix(e, t))[0];
    double s_fine = singular_values(weyl_matrix(e, t, fine))[0];
    CHECK(std::abs(s_def - s_fine) / s_fine < 1e-6);
}

TEST_CASE("adjoint round trip and the reflection identity") {
    BasisTruncation t{1, 32};
    OperatorMatrix W = weyl_matrix(circle_measure(), t);
    CHECK((adjoint(adjoint(W)).m - W.m).norm() == 0.0);
    OperatorMatrix Wr = weyl_matrix(make_reflect(circle_measure()), t);
    CHECK((Wr.m - adjoint(W).m).norm() < 1e-10);
}

TEST_CASE("singular value reference shapes") {
    OperatorMatrix I{BasisTruncation{1, 8}, Eigen::MatrixXcd::Identity(8, 8)};
    Eigen::VectorXd sv = singular_values(I);
    for (int i = 0; i < 8; ++i) CHECK(sv[i] == doctest::Approx(1.0).epsilon(1e-14));

    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(6, 6);
    R(2, 3) = cplx(0.0, 2.0);
    Eigen::VectorXd rv = singular_values(OperatorMatrix{BasisTruncation{1, 6}, R});
    CHECK(rv[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rv[1] < 1e-14);
}

TEST_CASE("quantum translation") {
    BasisTruncation t{1, 64};
    OperatorMatrix D = weyl_matrix(make_dirac(PhasePoint(0.3, 0.2)), t);

    OperatorMatrix same = quantum_translate(D, PhasePoint(0.0, 0.0));
    CHECK((same.m - D.m).norm() == 0.0);

    // Conjugating the identity does nothing up to truncation leakage.
    OperatorMatrix I{t, Eigen::MatrixXcd::Identity(64, 64)};
    OperatorMatrix moved = quantum_translate(I, PhasePoint(1.0, 0.0));
    CHECK((moved.m - I.m).block(0, 0, 16, 16).cwiseAbs().maxCoeff() < 1e-6);

    // Translating there and back restores the visible block.
    OperatorMatrix fwd = quantum_translate(D, PhasePoint(1.0, 0.0));
    OperatorMatrix back = quantum_translate(fwd, PhasePoint(-1.0, 0.0));
    CHECK((back.m - D.m).block(0, 0, 16, 16).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("compactness scan on the reference measures") {
    std::vector<int> sizes{32, 64, 128, 256};

    SpectrumReport circle = compactness_scan(circle_measure(), sizes, 8);
    CHECK(circle.trend == "non_decaying");
    REQUIRE(circle.singulars.size() == 4);
    double s1 = circle.singulars[3][0];
    CHECK(s1 == doctest::Approx(2.7972).epsilon(1e-3));
    // The middle singular value hovers near 0.16 sigma_1 over this range;
    // it rises between N = 32 and 64 before drifting down.
    double mid32 = circle.singulars[0][15];
    double mid64 = circle.singulars[1][31];
    CHECK(mid64 > mid32);
    CHECK(circle.singulars[3][127] / s1 > 0.1);

    SpectrumReport dirac = compactness_scan(make_dirac(PhasePoint(0.0, 0.0)), sizes, 8);
    CHECK(dirac.trend == "non_decaying");
    CHECK(dirac.singulars[3][127] == doctest::Approx(1.0).epsilon(1e-12));

    SpectrumReport seg = compactness_scan(segment_measure(0.5), sizes, 8);
    CHECK(seg.trend == "non_decaying");
}

TEST_CASE("scan validation") {
    MeasurePtr c = circle_measure();
    CHECK_THROWS_AS(compactness_scan(c, {}, 4), ConfigError);
    CHECK_THROWS_AS(compactness_scan(c, {64, 32}, 4), ConfigError);
    CHECK_THROWS_AS(compactness_scan(c, {32, 64}, 32), ConfigError);
    CHECK_THROWS_AS(compactness_scan(c, {32, 64}, 0), ConfigError);
}

TEST_CASE("nested truncations reuse the largest assembly faithfully") {
    // In laguerre mode the matrix entries do not depend on N, so scanning
    // may slice the largest assembly; the slices must equal independent
    // assemblies exactly.
    MeasurePtr c = circle_measure();
    SpectrumReport scan = compactness_scan(c, {16, 32}, 4);
    for (int i = 0; i < 2; ++i) {
        BasisTruncation t{1, scan.sizes[i]};
        Eigen::VectorXd direct = singular_values(weyl_matrix(c, t));
        CHECK((scan.singulars[i] - direct).norm() == 0.0);
    }
}

TEST_CASE("spectrum serialization") {
    SpectrumReport r = compactness_scan(make_dirac(PhasePoint(0.0, 0.0)), {4, 8}, 2);
    std::ostringstream csv;
    spectrum_csv(r, csv);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "N,k,sigma_k");
    int rows = 0;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 12);

    json j = spectrum_json(r);
    CHECK(j.at("trend") == "non_decaying");
    CHECK(j.at("sizes") == json::array({4, 8}));
    CHECK(j.at("probe_k") == 2);
    CHECK(j.at("probes").size() == 2);
    CHECK(j.at("ordering") == kOrderingVersion);
}
