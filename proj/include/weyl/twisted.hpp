#pragma once

#include <limits>

#include "weyl/basis.hpp"
#include "weyl/measure.hpp"
#include "weyl/rho.hpp"

namespace weyl {

// Ordered tuple (p_1, ..., p_k) of phase-space points.
using PhaseChain = std::vector<PhasePoint>;

// The k-fold twisted-convolution phase, evaluated left-associated:
//   phi_1 = 1,
//   phi_k = phi_{k-1} * e^{pi i ((x_1+..+x_{k-1}) . y_k - (y_1+..+y_{k-1}) . x_k)}.
// Renormalized to unit modulus after every step.
cplx phase_phi_k(const PhaseChain& chain);

// Weyl matrix of mu_1 nat ... nat mu_k by direct k-fold quadrature: the sum
// over the product stream of w_1..w_k * phi_k * rho(p_1 + .. + p_k). Children
// must be Dirac or Smooth (flatten nested tconv first) and the product of
// stream sizes must stay within opt.tconv_budget; otherwise use the "product"
// mode of weyl_matrix, which multiplies the children's matrices instead.
OperatorMatrix tconv_weyl_direct(const std::vector<MeasurePtr>& children,
                                 const BasisTruncation& trunc,
                                 const RhoOptions& rho_opt = {},
                                 const StreamOptions& stream_opt = {},
                                 int threads = 1);

struct DensityOptions {
    int seed_grid = 256;        // seed cells per parameter axis
    int newton_max = 32;
    double step_tol = 1e-12;    // Newton step size convergence
    double dedup_radius = 1e-8; // parameter-space identification radius
    double eps_j_rel = 1e-6;    // exclusion: |det J| < eps_j_rel * max speed product
    double residual_tol = 1e-9; // accept a root when |S(s,t)-z| <= tol * (1+|z|)
};

// Density of (a nat b) against Lebesgue measure at z, for curve measures in
// the plane (n = 1): the sum over the fiber {(s,t) : gamma(s)+delta(t) = z}
// of psi_a(s) psi_b(t) |gamma'(s)| |delta'(t)| phi_2(gamma(s), delta(t))
// divided by |det[gamma'(s) delta'(t)]|.
struct DensitySample {
    PhasePoint z;
    cplx value{0.0, 0.0};
    int roots_found = 0;
    // min over roots of |det J| / (|gamma'| |delta'|), i.e. |sin| of the
    // tangent crossing angle; +infinity when the fiber is empty.
    double nearest_critical_distance = std::numeric_limits<double>::infinity();
};

DensitySample tconv_density(const SmoothMeasureSpec& a, const SmoothMeasureSpec& b,
                            const PhasePoint& z, const DensityOptions& opt = {});

// Left side of the pairing identity: integral of g d(a nat b) computed as the
// double sum over both streams of w_a w_b phi_2(p, q) g(p + q). Serves as the
// independent check of tconv_density (integrate g(z) * density(z) dz instead).
cplx pairing_oracle(const MeasurePtr& a, const MeasurePtr& b,
                    const std::function<cplx(const PhasePoint&)>& g,
                    const StreamOptions& opt = {});

// Grid estimate of the area of {(s,t) : min(|gamma'-delta'|, |gamma'+delta'|) < eta}
// inside the parameter box. The critical set of S(s,t) = gamma(s)+delta(t) is
// where the tangents are parallel, so these estimates must shrink with eta
// whenever that set is a finite union of curves.
double critical_set_area(const Chart& a, const Chart& b, double eta, int grid = 512);

} // namespace weyl
