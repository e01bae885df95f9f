#pragma once

#include <Eigen/Dense>
#include <complex>

#include "weyl/errors.hpp"

namespace weyl {

using cplx = std::complex<double>;

// A point (x, y) of phase space R^{2n}.
struct PhasePoint {
    Eigen::VectorXd x;
    Eigen::VectorXd y;

    PhasePoint() = default;
    PhasePoint(Eigen::VectorXd x_, Eigen::VectorXd y_);
    PhasePoint(double x1, double y1); // n = 1 convenience

    int n() const { return static_cast<int>(x.size()); }

    PhasePoint operator+(const PhasePoint& q) const;
    PhasePoint operator-() const;
};

// (x, y, z) with |z| = 1, the reduced Heisenberg group.
struct HeisenbergElement {
    PhasePoint p;
    cplx z{1.0, 0.0};
};

// The exponent argument of the group law: x.y' - y.x'.
double symplectic_phase(const PhasePoint& p, const PhasePoint& q);

// (x,y,z)(x',y',z') = (x+x', y+y', zz' e^{pi i (x.y' - y.x')}).
HeisenbergElement group_mul(const HeisenbergElement& g, const HeisenbergElement& h);

HeisenbergElement group_inverse(const HeisenbergElement& g);

// e^{pi i (x.y' - y.x')}, the k=2 base case of the phase recursion.
cplx phase_phi_2(const PhasePoint& p, const PhasePoint& q);

} // namespace weyl
