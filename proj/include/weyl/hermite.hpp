#pragma once

#include <Eigen/Dense>
#include <vector>

#include "weyl/errors.hpp"

namespace weyl {

inline constexpr int kHermiteMaxIndex = 2048;

// Values h_0(t) .. h_{K-1}(t) of the L^2(R)-orthonormal Hermite functions,
// h_0(t) = pi^{-1/4} e^{-t^2/2},
// h_k(t) = t sqrt(2/k) h_{k-1}(t) - sqrt((k-1)/k) h_{k-2}(t).
// The recurrence runs with an explicit base-2 exponent so that nodes beyond
// |t| ~ 38.6 (where h_0 underflows) still produce the correct h_k for large
// k; entries whose true value underflows double precision come back as 0.
std::vector<double> hermite_values(int K, double t);

double hermite_fn(int k, double t);

// Gauss-Hermite rule for weight e^{-t^2}: nodes are eigenvalues of the
// Jacobi matrix with off-diagonal sqrt(k/2) (Golub-Welsch), polished by
// Newton on h_Q. `scaled_weights` are w_q e^{u_q^2}, computed through the
// Christoffel identity 1 / sum_{k<Q} h_k(u_q)^2; they stay O(1), so the
// integrand of interest (products of Hermite functions, which carry the
// Gaussian themselves) is summed without any overflow scale juggling.
struct GaussHermite {
    Eigen::VectorXd nodes;
    Eigen::VectorXd scaled_weights;
};

GaussHermite gauss_hermite(int Q);

} // namespace weyl
