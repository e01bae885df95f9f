#include "weyl/rho.hpp"

#include <cmath>

#include "weyl/hermite.hpp"

namespace weyl {

std::vector<double> laguerre_column(int d, double xi, int count) {
    std::vector<double> l(count, 0.0);
    if (count < 1) return l;
    if (xi == 0.0) {
        // l_k^{(0)}(0) = 1, higher diagonals vanish.
        if (d == 0) std::fill(l.begin(), l.end(), 1.0);
        return l;
    }
    // Log-space start keeps xi^{d/2}/sqrt(d!) alive for large d; a true
    // underflow to 0 is honest (the whole column is then below 1e-300).
    l[0] = std::exp(-0.5 * xi + 0.5 * d * std::log(xi) - 0.5 * std::lgamma(d + 1.0));
    if (count == 1) return l;
    l[1] = (d + 1.0 - xi) / std::sqrt(d + 1.0) * l[0];
    for (int m = 1; m + 1 < count; ++m) {
        l[m + 1] = ((2.0 * m + d + 1.0 - xi) * l[m] -
                    std::sqrt(m * (m + double(d))) * l[m - 1]) /
                   std::sqrt((m + 1.0) * (m + 1.0 + d));
    }
    return l;
}

static Eigen::MatrixXcd rho_laguerre(double x, double y, int N) {
    Eigen::MatrixXcd a(N, N);
    const double w = 2.0 * M_PI * y;
    const double xi = 0.5 * (x * x + w * w);
    if (xi == 0.0)
        return Eigen::MatrixXcd::Identity(N, N);
    const double r = std::sqrt(x * x + w * w);
    const cplx pa(x / r, w / r);   // alpha/|alpha|
    const cplx pb(-x / r, w / r);  // beta/|beta|
    cplx pad(1.0, 0.0), pbd(1.0, 0.0);
    for (int d = 0; d < N; ++d) {
        std::vector<double> col = laguerre_column(d, xi, N - d);
        for (int k = 0; k + d < N; ++k) {
            a(k + d, k) = pbd * col[k];
            a(k, k + d) = pad * col[k];
        }
        pad *= pa;
        pbd *= pb;
    }
    return a;
}

static Eigen::MatrixXcd rho_quadrature_at(double x, double y, int N, int Q) {
    GaussHermite gh = gauss_hermite(Q);
    Eigen::MatrixXd p(Q, N), sc(Q, N), ss(Q, N);
    for (int q = 0; q < Q; ++q) {
        const double u = gh.nodes[q];
        std::vector<double> hj = hermite_values(N, u - 0.5 * x);
        std::vector<double> hk = hermite_values(N, u + 0.5 * x);
        const double wc = gh.scaled_weights[q] * std::cos(2.0 * M_PI * y * u);
        const double ws = gh.scaled_weights[q] * std::sin(2.0 * M_PI * y * u);
        for (int j = 0; j < N; ++j) p(q, j) = hj[j];
        for (int k = 0; k < N; ++k) {
            sc(q, k) = wc * hk[k];
            ss(q, k) = ws * hk[k];
        }
    }
    Eigen::MatrixXd re = p.transpose() * sc;
    Eigen::MatrixXd im = p.transpose() * ss;
    Eigen::MatrixXcd a(N, N);
    a.real() = re;
    a.imag() = im;
    return a;
}

static Eigen::MatrixXcd rho_quadrature(double x, double y, int N, const RhoOptions& opt) {
    int q = opt.quad_order;
    if (q <= 0) {
        const double py = M_PI * std::abs(y);
        q = std::max(2 * N, 64) + static_cast<int>(std::ceil(4.0 * py * py));
    }
    if (2 * q > kHermiteMaxIndex)
        throw NumericError("rho_matrix_1d: required quadrature order exceeds the Hermite cap");
    Eigen::MatrixXcd fine = rho_quadrature_at(x, y, N, 2 * q);
    if (opt.convergence_check) {
        Eigen::MatrixXcd coarse = rho_quadrature_at(x, y, N, q);
        const double diff = (fine - coarse).cwiseAbs().maxCoeff();
        if (diff > 1e-10)
            throw NumericError("rho_matrix_1d: quadrature not converged for this |y|; "
                               "raise the quadrature order");
    }
    return fine;
}

Eigen::MatrixXcd rho_matrix_1d(double x, double y, int N, const RhoOptions& opt) {
    if (N < 1)
        throw ConfigError("rho_matrix_1d: N must be >= 1");
    if (std::isnan(x) || std::isnan(y))
        throw NumericError("rho_matrix_1d: NaN argument");
    if (std::abs(x) > opt.box || std::abs(y) > opt.box)
        throw NumericError("rho_matrix_1d: |x| or |y| outside the configured box");
    if (opt.mode == RhoMode::laguerre)
        return rho_laguerre(x, y, N);
    return rho_quadrature(x, y, N, opt);
}

OperatorMatrix rho_matrix(const PhasePoint& p, const BasisTruncation& trunc,
                          const RhoOptions& opt) {
    if (!valid(trunc))
        throw ConfigError("rho_matrix: invalid truncation");
    if (p.n() != trunc.n)
        throw ConfigError("rho_matrix: point dimension does not match truncation");
    OperatorMatrix out{trunc, {}};
    if (trunc.n == 1) {
        out.m = rho_matrix_1d(p.x[0], p.y[0], trunc.N, opt);
        return out;
    }
    std::vector<Eigen::MatrixXcd> fac(trunc.n);
    for (int i = 0; i < trunc.n; ++i)
        fac[i] = rho_matrix_1d(p.x[i], p.y[i], trunc.N, opt);
    const auto idx = graded_indices(trunc);
    const long m = trunc.size();
    out.m.resize(m, m);
    for (long a = 0; a < m; ++a)
        for (long b = 0; b < m; ++b) {
            cplx v(1.0, 0.0);
            for (int i = 0; i < trunc.n; ++i) v *= fac[i](idx[a][i], idx[b][i]);
            out.m(a, b) = v;
        }
    return out;
}

} // namespace weyl
