#include "weyl/phase_space.hpp"

#include <cmath>
#include <utility>

namespace weyl {

PhasePoint::PhasePoint(Eigen::VectorXd x_, Eigen::VectorXd y_)
    : x(std::move(x_)), y(std::move(y_)) {
    if (x.size() != y.size() || x.size() < 1)
        throw ConfigError("phase point components must share dimension n >= 1");
}

PhasePoint::PhasePoint(double x1, double y1) {
    x.resize(1);
    y.resize(1);
    x[0] = x1;
    y[0] = y1;
}

PhasePoint PhasePoint::operator+(const PhasePoint& q) const {
    if (n() != q.n())
        throw ConfigError("phase point dimension mismatch");
    return PhasePoint(x + q.x, y + q.y);
}

PhasePoint PhasePoint::operator-() const { return PhasePoint(-x, -y); }

double symplectic_phase(const PhasePoint& p, const PhasePoint& q) {
    if (p.n() != q.n())
        throw ConfigError("symplectic_phase: dimension mismatch");
    return p.x.dot(q.y) - p.y.dot(q.x);
}

cplx phase_phi_2(const PhasePoint& p, const PhasePoint& q) {
    return std::polar(1.0, M_PI * symplectic_phase(p, q));
}

HeisenbergElement group_mul(const HeisenbergElement& g, const HeisenbergElement& h) {
    cplx z = g.z * h.z * phase_phi_2(g.p, h.p);
    // Re-normalize so long phase products cannot drift off the unit circle.
    z /= std::abs(z);
    return HeisenbergElement{g.p + h.p, z};
}

HeisenbergElement group_inverse(const HeisenbergElement& g) {
    // (x,y,z)^{-1} = (-x,-y,conj(z)): the symplectic phase of (p,-p) vanishes.
    return HeisenbergElement{-g.p, std::conj(g.z)};
}

} // namespace weyl
