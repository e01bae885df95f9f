#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weyl/phase_space.hpp"

namespace weyl {

// Single-patch parametrization of an m-dimensional submanifold of R^{2n}.
// jet(u, d) returns all derivatives up to order d, order 0 first:
//   m == 1: [gamma, gamma', gamma'', ...] (analytic catalog jets)
//   m >= 2: d must be 1; [p, d/du_1 p, ..., d/du_m p].
struct Chart {
    std::string name;
    int m = 1;
    int n = 1;
    std::vector<std::array<double, 2>> domain;
    std::vector<bool> periodic; // per parameter; used for root dedup
    std::function<PhasePoint(const Eigen::VectorXd&)> eval;
    std::function<std::vector<PhasePoint>(const Eigen::VectorXd&, int)> jet;
};

// gamma'(s) for curves (m = 1).
PhasePoint curve_velocity(const Chart& c, double s);

// sqrt(det(J^T J)) with J the 2n x m matrix of first partials; the speed
// |gamma'| for curves. Throws NumericError naming the node when the rank
// drops (sigma_min < 1e-10 sigma_max).
double riemannian_factor(const Chart& c, const Eigen::VectorXd& u);

// Negated image, same parameter domain (so reflected measures reuse the
// same quadrature nodes).
Chart reflect_chart(const Chart& c);

// Fixtures: circle{r, center}, ellipse{a, b, center}, line_segment{a, b},
// parabola_arc{half_width}, cubic_arc{}, polynomial_curve{coeff_x, coeff_y,
// t_min, t_max}, sphere3{r} (the unit 3-sphere in R^4, n = 2).
Chart curve_catalog(const std::string& name, const nlohmann::json& params);

// {"name": "circle", ...params} form used in measure files.
Chart chart_from_json(const nlohmann::json& spec);

} // namespace weyl
