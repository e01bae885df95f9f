#pragma once

#include <optional>

#include "weyl/chart.hpp"

namespace weyl {

// One shared knob: every geometric question below reduces to a numerical
// rank, decided by singular values above rtol * sigma_max.
inline constexpr double kRankTolDefault = 1e-8;

// Smallest k such that gamma'(s), ..., gamma^{(k)}(s) span R^{2n}; nullopt
// when the span stays deficient through max_order ("exceeds"). Curves only.
std::optional<int> finite_type_order(const Chart& c, double s, int max_order,
                                     double rtol = kRankTolDefault);

struct TypeReport {
    std::vector<double> samples;
    std::vector<std::optional<int>> orders; // nullopt = exceeds max_order
    int max_order = 0;
};

TypeReport type_report(const Chart& c, const std::vector<double>& samples,
                       int max_order, double rtol = kRankTolDefault);

// Stacks the tangent spaces at the given chart points; true iff they span
// R^{2n}. Second member is the achieved rank.
std::pair<bool, int> tangent_span_check(
    const std::vector<std::pair<const Chart*, Eigen::VectorXd>>& points,
    double rtol = kRankTolDefault);

struct SpanSearch {
    bool found = false;
    int rank = 0;
    std::vector<Eigen::VectorXd> points;
};

// Scans the sampler in order and keeps a point iff it strictly increases
// the stacked tangent rank, stopping at rank 2n. With pad_even, a found
// spanning set of odd size gets the first sampler point appended (the span
// is unchanged; some constructions want an even count).
SpanSearch greedy_spanning_points(const Chart& c,
                                  const std::vector<Eigen::VectorXd>& sampler,
                                  bool pad_even = false,
                                  double rtol = kRankTolDefault);

struct Hyperplane {
    Eigen::VectorXd normal; // unit, first nonzero component positive
    double offset = 0.0;    // normal . p = offset on the plane
};

// Best affine hyperplane through the sampled chart points, reported only
// when the maximal residual is <= 1e-8 * (sample diameter). Requires at
// least 2n+1 samples; identical samples are an error.
std::optional<Hyperplane> hyperplane_containment(
    const Chart& c, const std::vector<Eigen::VectorXd>& samples);

} // namespace weyl
