#pragma once

#include <iosfwd>

#include "weyl/measure.hpp"
#include "weyl/rho.hpp"

namespace weyl {

// How TConv nodes are evaluated inside weyl_matrix.
//   direct:  k-fold quadrature of the phi_k-weighted product stream.
//   product: W(mu_1) * ... * W(mu_k), using W(mu nat nu) = W(mu) W(nu).
// Product is the default: the direct stream grows as nodes^k and is capped
// by StreamOptions::tconv_budget, while the product needs k assemblies.
enum class TConvMode { direct, product };

struct WeylOptions {
    RhoOptions rho{};
    StreamOptions stream{};
    TConvMode tconv_mode = TConvMode::product;
    int threads = 1;
};

// sum over the stream of w * rho_matrix(p). Nodes are grouped into fixed
// 256-node chunks; chunk partial sums are computed independently (possibly
// on worker threads) and always combined in chunk order, so the result is
// bitwise identical for every thread count.
OperatorMatrix accumulate_stream(const std::vector<WeightedNode>& stream,
                                 const BasisTruncation& trunc,
                                 const RhoOptions& rho_opt, int threads = 1);

// W(lambda) truncated to the basis box: Dirac -> rho_matrix; Smooth ->
// quadrature accumulation; Sum -> exact linear combination in term order;
// Reflect -> transform of the reflected measure; TConv per tconv_mode.
OperatorMatrix weyl_matrix(const MeasurePtr& m, const BasisTruncation& trunc,
                           const WeylOptions& opt = {});

// Descending singular values of the truncated operator.
Eigen::VectorXd singular_values(const OperatorMatrix& M);

OperatorMatrix adjoint(const OperatorMatrix& M);

// rho(p) M rho(p)^{-1} at the truncation; the inverse is realized as
// rho(-p), which is the exact operator inverse (and, in laguerre mode,
// bitwise the conjugate transpose of rho(p)).
OperatorMatrix quantum_translate(const OperatorMatrix& M, const PhasePoint& p,
                                 const RhoOptions& rho_opt = {});

struct ScanThresholds {
    double tau_dec_rel = 1e-3;  // "decaying" must dip below tau_dec_rel * sigma_1
    double tau_flat_rel = 1e-1; // "non_decaying" must stay above tau_flat_rel * sigma_1
};

// Truncation-trend probe of compactness. For each N the full descending
// spectrum is kept; the classification watches the middle singular value
// sigma_{ceil(N/2)} across the scan. A finite scan can only report a trend,
// so the raw numbers always travel with the verdict.
struct SpectrumReport {
    std::vector<int> sizes;                 // the N values scanned
    std::vector<Eigen::VectorXd> singulars; // descending, one sequence per N
    int probe_k = 1;                        // the configured probe index K (1-based)
    ScanThresholds thresholds;
    std::string trend;                      // decaying | non_decaying | inconclusive
};

// Assembles W at each N in n_list (increasing) and classifies the trend:
// "decaying" if sigma_{ceil(N/2)} is non-increasing across the scan and ends
// below tau_dec_rel * sigma_1; "non_decaying" if it stays above
// tau_flat_rel * sigma_1 at every N; "inconclusive" otherwise. sigma_1 is
// taken at the largest N.
SpectrumReport compactness_scan(const MeasurePtr& m, const std::vector<int>& n_list,
                                int probe_k, const WeylOptions& opt = {},
                                const ScanThresholds& thresholds = {});

// CSV with one row per (N, k): columns N, k, sigma_k.
void spectrum_csv(const SpectrumReport& report, std::ostream& os);

// Sidecar with sizes, probes, thresholds, and the trend.
nlohmann::json spectrum_json(const SpectrumReport& report);

} // namespace weyl
