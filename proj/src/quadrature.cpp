#include "weyl/quadrature.hpp"

#include <cmath>

namespace weyl {

Quad1D gauss_legendre(int order) {
    if (order < 1 || order > 128)
        throw ConfigError("gauss_legendre: order must be in [1, 128]");
    Quad1D q;
    q.nodes.resize(order);
    q.weights.resize(order);
    // Newton on P_n from the Chebyshev-like initial guess; the recurrence
    // also yields P_n' for the weight 2 / ((1 - x^2) P_n'(x)^2).
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            if (n == 1) p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double pn = (n == 1) ? x : p1;
            double pm = (n == 1) ? 1.0 : p0;
            pp = n * (x * pn - pm) / (x * x - 1.0);
            double dx = pn / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[i] = -x;
        q.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) q.nodes[n / 2] = 0.0;
    return q;
}

Quad1D composite_gauss_legendre(double a, double b, int panels, int order) {
    if (panels < 1)
        throw ConfigError("composite_gauss_legendre: panels must be >= 1");
    Quad1D base = gauss_legendre(order);
    Quad1D q;
    q.nodes.resize(panels * order);
    q.weights.resize(panels * order);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (int i = 0; i < order; ++i) {
            q.nodes[p * order + i] = lo + 0.5 * h * (base.nodes[i] + 1.0);
            q.weights[p * order + i] = 0.5 * h * base.weights[i];
        }
    }
    return q;
}

} // namespace weyl
