#include "weyl/hermite.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace weyl {

std::vector<double> hermite_values(int K, double t) {
    if (K < 1)
        throw ConfigError("hermite_values: K must be >= 1");
    if (K - 1 > kHermiteMaxIndex)
        throw ConfigError("hermite_values: index beyond configured maximum 2048");
    if (std::isnan(t))
        throw NumericError("hermite_values: NaN argument");

    std::vector<double> out(K, 0.0);

    // h_0 in log2 form; exponent e2 is shared by the rolling pair (a, b).
    const double l2 = (-0.5 * t * t - 0.25 * std::log(M_PI)) / M_LN2;
    double e2d = std::floor(l2);
    double a = std::exp2(l2 - e2d); // h_0 mantissa
    long e2 = static_cast<long>(e2d);
    double b = 0.0;                 // "h_{-1}"

    auto emit = [&](int k, double mant) {
        // ldexp saturates to 0 / inf outside double range; 0 is the honest
        // answer for a true underflow, inf cannot occur (|h_k| <= ~1).
        out[k] = std::ldexp(mant, static_cast<int>(std::max<long>(e2, -1075)));
    };
    emit(0, a);
    for (int k = 1; k < K; ++k) {
        double c = t * std::sqrt(2.0 / k) * a - std::sqrt((k - 1.0) / k) * b;
        b = a;
        a = c;
        // Keep the pair well inside double range; 2^±512 leaves headroom for
        // the t-multiplication above.
        double m = std::max(std::abs(a), std::abs(b));
        if (m > 0x1p512) {
            a *= 0x1p-512;
            b *= 0x1p-512;
            e2 += 512;
        } else if (m < 0x1p-512 && m > 0.0) {
            a *= 0x1p512;
            b *= 0x1p512;
            e2 -= 512;
        }
        emit(k, a);
    }
    return out;
}

double hermite_fn(int k, double t) {
    if (k < 0)
        throw ConfigError("hermite_fn: negative index");
    return hermite_values(k + 1, t).back();
}

GaussHermite gauss_hermite(int Q) {
    if (Q < 1 || Q > kHermiteMaxIndex)
        throw ConfigError("gauss_hermite: order must be in [1, 2048]");

    Eigen::VectorXd diag = Eigen::VectorXd::Zero(Q);
    Eigen::VectorXd sub(Q > 1 ? Q - 1 : 1);
    for (int k = 1; k < Q; ++k) sub[k - 1] = std::sqrt(0.5 * k);

    GaussHermite rule;
    if (Q == 1) {
        rule.nodes = Eigen::VectorXd::Zero(1);
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw NumericError("gauss_hermite: tridiagonal eigensolve failed");
        rule.nodes = es.eigenvalues();
        // The spectrum is symmetric; average the mirrored pair to pin it.
        for (int i = 0; i < Q / 2; ++i) {
            double v = 0.5 * (rule.nodes[Q - 1 - i] - rule.nodes[i]);
            rule.nodes[i] = -v;
            rule.nodes[Q - 1 - i] = v;
        }
        if (Q % 2 == 1) rule.nodes[Q / 2] = 0.0;
    }

    // Newton polish on h_Q (two steps), using h_Q' = sqrt(2Q) h_{Q-1} - t h_Q.
    for (int i = 0; i < Q; ++i) {
        double t = rule.nodes[i];
        for (int it = 0; it < 2; ++it) {
            std::vector<double> h = hermite_values(Q + 1, t);
            double d = std::sqrt(2.0 * Q) * h[Q - 1] - t * h[Q];
            if (d == 0.0) break;
            t -= h[Q] / d;
        }
        rule.nodes[i] = t;
    }
    // Re-symmetrize after polishing so mirrored nodes agree bit-for-bit.
    for (int i = 0; i < Q / 2; ++i) {
        double v = 0.5 * (rule.nodes[Q - 1 - i] - rule.nodes[i]);
        rule.nodes[i] = -v;
        rule.nodes[Q - 1 - i] = v;
    }
    if (Q % 2 == 1) rule.nodes[Q / 2] = 0.0;

    rule.scaled_weights.resize(Q);
    for (int i = 0; i < Q; ++i) {
        std::vector<double> h = hermite_values(Q, rule.nodes[i]);
        double s = 0.0;
        for (int k = 0; k < Q; ++k) s += h[k] * h[k];
        rule.scaled_weights[i] = 1.0 / s;
    }
    return rule;
}

} // namespace weyl
