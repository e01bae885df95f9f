#pragma once

#include <Eigen/Dense>

#include "weyl/errors.hpp"

namespace weyl {

struct Quad1D {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

// Composite quadrature parameters for chart integrals. The default (64
// panels of order 8) resolves the oscillatory factors e^{pi i(.)} that
// later multiply the integrands at moderate truncation sizes.
struct QuadSpec {
    int panels = 64;
    int order = 8;
};

// Gauss-Legendre rule on [-1, 1], exact through polynomial degree 2*order-1.
Quad1D gauss_legendre(int order);

// Composite Gauss-Legendre on [a, b] with `panels` equal subintervals.
Quad1D composite_gauss_legendre(double a, double b, int panels, int order);

} // namespace weyl
