#include "weyl/weyl_transform.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <map>
#include <ostream>

#include <json.hpp>

#include "weyl/twisted.hpp"

namespace weyl {

OperatorMatrix accumulate_stream(const std::vector<WeightedNode>& stream,
                                 const BasisTruncation& trunc,
                                 const RhoOptions& rho_opt, int threads) {
    if (!valid(trunc))
        throw ConfigError("accumulate_stream: invalid basis truncation");
    const long dim = trunc.size();
    constexpr size_t kChunk = 256;
    const size_t nchunks = (stream.size() + kChunk - 1) / kChunk;
    const size_t batch = static_cast<size_t>(std::max(threads, 1));

    auto chunk_sum = [&](size_t c) {
        Eigen::MatrixXcd part = Eigen::MatrixXcd::Zero(dim, dim);
        const size_t b = c * kChunk;
        const size_t e = std::min(stream.size(), b + kChunk);
        for (size_t i = b; i < e; ++i)
            part += stream[i].w * rho_matrix(stream[i].p, trunc, rho_opt).m;
        return part;
    };

    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
    if (batch <= 1) {
        for (size_t c = 0; c < nchunks; ++c) acc += chunk_sum(c);
    } else {
        for (size_t base = 0; base < nchunks; base += batch) {
            const size_t hi = std::min(nchunks, base + batch);
            std::vector<std::future<Eigen::MatrixXcd>> parts;
            for (size_t c = base; c < hi; ++c)
                parts.push_back(std::async(std::launch::async, chunk_sum, c));
            // Combine in chunk order regardless of completion order.
            for (auto& f : parts) acc += f.get();
        }
    }
    return {trunc, std::move(acc)};
}

namespace {

OperatorMatrix weyl_rec(const MeasurePtr& m, const BasisTruncation& trunc,
                        const WeylOptions& opt) {
    return std::visit(
        [&](const auto& node) -> OperatorMatrix {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, MeasureExpr::Dirac>) {
                return rho_matrix(node.p, trunc, opt.rho);
            } else if constexpr (std::is_same_v<T, MeasureExpr::Smooth>) {
                return accumulate_stream(smooth_stream(node.spec, opt.stream),
                                         trunc, opt.rho, opt.threads);
            } else if constexpr (std::is_same_v<T, MeasureExpr::Sum>) {
                Eigen::MatrixXcd acc =
                    Eigen::MatrixXcd::Zero(trunc.size(), trunc.size());
                for (const auto& [w, c] : node.terms)
                    acc += w * weyl_rec(c, trunc, opt).m;
                return {trunc, std::move(acc)};
            } else if constexpr (std::is_same_v<T, MeasureExpr::TConv>) {
                if (opt.tconv_mode == TConvMode::direct)
                    return tconv_weyl_direct(node.children, trunc, opt.rho,
                                             opt.stream, opt.threads);
                OperatorMatrix out = weyl_rec(node.children.front(), trunc, opt);
                for (size_t i = 1; i < node.children.size(); ++i)
                    out.m = out.m * weyl_rec(node.children[i], trunc, opt).m;
                return out;
            } else {
                // normalize_reflections leaves no Reflect nodes; keep a
                // correct fallback anyway.
                return weyl_rec(reflect_measure(node.child), trunc, opt);
            }
        },
        m->node);
}

bool contains_tconv(const MeasurePtr& m) {
    return std::visit(
        [&](const auto& node) -> bool {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, MeasureExpr::TConv>) {
                return true;
            } else if constexpr (std::is_same_v<T, MeasureExpr::Reflect>) {
                return contains_tconv(node.child);
            } else if constexpr (std::is_same_v<T, MeasureExpr::Sum>) {
                for (const auto& [w, c] : node.terms)
                    if (contains_tconv(c)) return true;
                return false;
            } else {
                return false;
            }
        },
        m->node);
}

} // namespace

OperatorMatrix weyl_matrix(const MeasurePtr& m, const BasisTruncation& trunc,
                           const WeylOptions& opt) {
    if (!m) throw ConfigError("weyl_matrix: null measure");
    if (!valid(trunc)) throw ConfigError("weyl_matrix: invalid basis truncation");
    if (m->n != trunc.n)
        throw ConfigError("weyl_matrix: measure lives in n = " +
                          std::to_string(m->n) + " but truncation has n = " +
                          std::to_string(trunc.n));
    return weyl_rec(normalize_reflections(m), trunc, opt);
}

Eigen::VectorXd singular_values(const OperatorMatrix& M) {
    if (!M.m.allFinite())
        throw NumericError("singular_values: matrix has non-finite entries");
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(M.m);
    if (svd.info() != Eigen::Success)
        throw NumericError("singular_values: decomposition did not converge");
    return svd.singularValues();
}

OperatorMatrix adjoint(const OperatorMatrix& M) {
    return {M.trunc, M.m.adjoint()};
}

OperatorMatrix quantum_translate(const OperatorMatrix& M, const PhasePoint& p,
                                 const RhoOptions& rho_opt) {
    const Eigen::MatrixXcd left = rho_matrix(p, M.trunc, rho_opt).m;
    const Eigen::MatrixXcd right = rho_matrix(-p, M.trunc, rho_opt).m;
    return {M.trunc, left * M.m * right};
}

SpectrumReport compactness_scan(const MeasurePtr& m, const std::vector<int>& n_list,
                                int probe_k, const WeylOptions& opt,
                                const ScanThresholds& thresholds) {
    if (!m) throw ConfigError("compactness_scan: null measure");
    if (n_list.empty())
        throw ConfigError("compactness_scan: empty size list");
    for (size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1)
            throw ConfigError("compactness_scan: sizes must be positive");
        if (i > 0 && n_list[i] <= n_list[i - 1])
            throw ConfigError("compactness_scan: sizes must be strictly increasing");
    }
    if (probe_k < 1 || probe_k >= n_list.front())
        throw ConfigError("compactness_scan: probe index K must satisfy 1 <= K < min(N)");

    SpectrumReport report;
    report.sizes = n_list;
    report.probe_k = probe_k;
    report.thresholds = thresholds;

    MeasurePtr nm = normalize_reflections(m);
    // In laguerre mode the matrix elements do not depend on N, and every
    // tconv-free tree is entrywise linear in them, so the scan at every N is
    // a sub-block of the largest assembly. Matrix products break this, hence
    // the tconv exclusion.
    const bool nested = (opt.rho.mode == RhoMode::laguerre) && !contains_tconv(nm);

    if (nested) {
        const BasisTruncation big{nm->n, n_list.back()};
        const OperatorMatrix big_m = weyl_matrix(nm, big, opt);
        std::map<std::vector<int>, long> pos;
        {
            const auto big_idx = graded_indices(big);
            for (long i = 0; i < static_cast<long>(big_idx.size()); ++i)
                pos[big_idx[i]] = i;
        }
        for (int N : n_list) {
            const BasisTruncation small{nm->n, N};
            const auto idx = graded_indices(small);
            Eigen::MatrixXcd sub(idx.size(), idx.size());
            for (size_t r = 0; r < idx.size(); ++r)
                for (size_t c = 0; c < idx.size(); ++c)
                    sub(r, c) = big_m.m(pos.at(idx[r]), pos.at(idx[c]));
            report.singulars.push_back(
                singular_values(OperatorMatrix{small, std::move(sub)}));
        }
    } else {
        for (int N : n_list)
            report.singulars.push_back(
                singular_values(weyl_matrix(nm, BasisTruncation{nm->n, N}, opt)));
    }

    // Middle singular value sigma_{ceil(N/2)} per N (1-based index).
    std::vector<double> mid;
    for (size_t i = 0; i < n_list.size(); ++i) {
        const long k = std::min<long>((n_list[i] + 1) / 2,
                                      report.singulars[i].size());
        mid.push_back(report.singulars[i][k - 1]);
    }
    const double sigma1 = report.singulars.back()[0];
    bool monotone = true;
    for (size_t i = 1; i < mid.size(); ++i)
        if (mid[i] > mid[i - 1] * (1.0 + 1e-12)) monotone = false;
    bool above = true;
    for (double r : mid)
        if (r <= thresholds.tau_flat_rel * sigma1) above = false;

    if (monotone && mid.back() < thresholds.tau_dec_rel * sigma1)
        report.trend = "decaying";
    else if (above)
        report.trend = "non_decaying";
    else
        report.trend = "inconclusive";
    return report;
}

void spectrum_csv(const SpectrumReport& report, std::ostream& os) {
    os << "N,k,sigma_k\n" << std::setprecision(17);
    for (size_t i = 0; i < report.sizes.size(); ++i)
        for (long k = 0; k < report.singulars[i].size(); ++k)
            os << report.sizes[i] << ',' << (k + 1) << ','
               << report.singulars[i][k] << '\n';
}

nlohmann::json spectrum_json(const SpectrumReport& report) {
    nlohmann::json j;
    j["ordering"] = kOrderingVersion;
    j["sizes"] = report.sizes;
    j["probe_k"] = report.probe_k;
    j["thresholds"] = {{"tau_dec_rel", report.thresholds.tau_dec_rel},
                       {"tau_flat_rel", report.thresholds.tau_flat_rel}};
    j["trend"] = report.trend;
    nlohmann::json probes = nlohmann::json::array();
    for (size_t i = 0; i < report.sizes.size(); ++i) {
        const Eigen::VectorXd& s = report.singulars[i];
        const long mid = std::min<long>((report.sizes[i] + 1) / 2, s.size());
        const long kp = std::min<long>(report.probe_k, s.size());
        probes.push_back({{"N", report.sizes[i]},
                          {"sigma_1", s[0]},
                          {"sigma_K", s[kp - 1]},
                          {"sigma_mid", s[mid - 1]}});
    }
    j["probes"] = probes;
    return j;
}

} // namespace weyl
