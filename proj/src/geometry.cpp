#include "weyl/geometry.hpp"

#include <cmath>

namespace weyl {

namespace {

int numerical_rank(const Eigen::MatrixXd& m, double rtol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd& s = svd.singularValues();
    if (s.size() == 0 || s[0] == 0.0) return 0;
    int r = 0;
    for (long i = 0; i < s.size(); ++i)
        if (s[i] > rtol * s[0]) ++r;
    return r;
}

Eigen::VectorXd flatten(const PhasePoint& p) {
    Eigen::VectorXd v(2 * p.n());
    v << p.x, p.y;
    return v;
}

} // namespace

std::optional<int> finite_type_order(const Chart& c, double s, int max_order,
                                     double rtol) {
    if (c.m != 1)
        throw ConfigError("finite_type_order: chart must be a curve");
    if (max_order < 1)
        throw ConfigError("finite_type_order: max_order must be >= 1");
    Eigen::VectorXd u(1);
    u[0] = s;
    const std::vector<PhasePoint> jets = c.jet(u, max_order);
    Eigen::MatrixXd stacked(2 * c.n, max_order);
    for (int k = 1; k <= max_order; ++k) {
        stacked.col(k - 1) = flatten(jets[k]);
        if (numerical_rank(stacked.leftCols(k), rtol) == 2 * c.n) return k;
    }
    return std::nullopt;
}

TypeReport type_report(const Chart& c, const std::vector<double>& samples,
                       int max_order, double rtol) {
    TypeReport rep;
    rep.samples = samples;
    rep.max_order = max_order;
    for (double s : samples)
        rep.orders.push_back(finite_type_order(c, s, max_order, rtol));
    return rep;
}

std::pair<bool, int> tangent_span_check(
    const std::vector<std::pair<const Chart*, Eigen::VectorXd>>& points,
    double rtol) {
    if (points.empty()) return {false, 0};
    const int n = points.front().first->n;
    std::vector<Eigen::VectorXd> cols;
    for (const auto& [chart, u] : points) {
        if (chart->n != n)
            throw ConfigError("tangent_span_check: charts disagree on dimension n");
        const std::vector<PhasePoint> jets = chart->jet(u, 1);
        for (size_t d = 1; d < jets.size(); ++d) cols.push_back(flatten(jets[d]));
    }
    Eigen::MatrixXd stacked(2 * n, cols.size());
    for (size_t i = 0; i < cols.size(); ++i) stacked.col(i) = cols[i];
    const int rank = numerical_rank(stacked, rtol);
    return {rank == 2 * n, rank};
}

SpanSearch greedy_spanning_points(const Chart& c,
                                  const std::vector<Eigen::VectorXd>& sampler,
                                  bool pad_even, double rtol) {
    SpanSearch out;
    std::vector<std::pair<const Chart*, Eigen::VectorXd>> kept;
    for (const Eigen::VectorXd& u : sampler) {
        if (out.rank == 2 * c.n) break;
        kept.emplace_back(&c, u);
        const auto [full, rank] = tangent_span_check(kept, rtol);
        if (rank > out.rank) {
            out.rank = rank;
            out.points.push_back(u);
        } else {
            kept.pop_back();
        }
    }
    out.found = (out.rank == 2 * c.n);
    if (out.found && pad_even && out.points.size() % 2 != 0 && !sampler.empty())
        out.points.push_back(sampler.front());
    return out;
}

std::optional<Hyperplane> hyperplane_containment(
    const Chart& c, const std::vector<Eigen::VectorXd>& samples) {
    const long dim = 2 * c.n;
    if (static_cast<long>(samples.size()) < dim + 1)
        throw ConfigError("hyperplane_containment: need at least 2n+1 samples");

    Eigen::MatrixXd pts(samples.size(), dim);
    for (size_t i = 0; i < samples.size(); ++i)
        pts.row(i) = flatten(c.eval(samples[i])).transpose();

    double diameter = 0.0;
    for (long i = 0; i < pts.rows(); ++i)
        for (long j = i + 1; j < pts.rows(); ++j)
            diameter = std::max(diameter, (pts.row(i) - pts.row(j)).norm());
    if (diameter == 0.0)
        throw NumericError("hyperplane_containment: all samples coincide");

    const Eigen::RowVectorXd centroid = pts.colwise().mean();
    const Eigen::MatrixXd centered = pts.rowwise() - centroid;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    Eigen::VectorXd normal = svd.matrixV().col(dim - 1);

    const double max_residual = (centered * normal).cwiseAbs().maxCoeff();
    if (max_residual > 1e-8 * diameter) return std::nullopt;

    for (long i = 0; i < normal.size(); ++i) {
        if (std::abs(normal[i]) > 1e-12) {
            if (normal[i] < 0.0) normal = -normal;
            break;
        }
    }
    return Hyperplane{normal, normal.dot(centroid.transpose())};
}

} // namespace weyl
