#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "weyl/chart.hpp"
#include "weyl/quadrature.hpp"

namespace weyl {

// Density psi on the parameter domain of a chart. Only closed-form families
// are representable (file-format determinism; no user code).
struct Density {
    std::string desc;
    std::function<double(const Eigen::VectorXd&)> eval;
};

Density density_constant(double value);
// amp * exp(1 - 1/(1 - |u-c|^2/r^2)) inside the radius, 0 outside.
Density density_bump(Eigen::VectorXd center, double radius, double amplitude);
Density density_poly(std::vector<double> coeffs); // curves only, ascending powers

struct SmoothMeasureSpec {
    Chart chart;
    Density density;
};

struct MeasureExpr;
using MeasurePtr = std::shared_ptr<const MeasureExpr>;

// Expression tree for finite Borel measures on R^{2n}; complex weights are
// allowed because twisted convolution produces phase-weighted pushforwards.
struct MeasureExpr {
    struct Dirac { PhasePoint p; };
    struct Smooth { SmoothMeasureSpec spec; };
    struct Reflect { MeasurePtr child; };
    struct TConv { std::vector<MeasurePtr> children; };
    struct Sum { std::vector<std::pair<cplx, MeasurePtr>> terms; };

    int n = 1;
    std::variant<Dirac, Smooth, Reflect, TConv, Sum> node;
};

MeasurePtr make_dirac(PhasePoint p);
MeasurePtr make_smooth(SmoothMeasureSpec spec);
MeasurePtr make_reflect(MeasurePtr child);
MeasurePtr make_tconv(std::vector<MeasurePtr> children);
MeasurePtr make_sum(std::vector<std::pair<cplx, MeasurePtr>> terms);

// The reflected measure: Dirac(p) -> Dirac(-p); Smooth -> negated chart
// image on the same nodes; sums distribute with conjugated weights;
// Reflect(Reflect(m)) -> m; TConv(a,..,z) -> TConv(z~,..,a~). The order
// must reverse so that W(mu~) = W(mu)* stays compatible with
// W(mu nat nu) = W(mu) W(nu): adjoints of products reverse factors.
MeasurePtr reflect_measure(const MeasurePtr& m);

// Same tree with every Reflect node pushed through (result contains none).
MeasurePtr normalize_reflections(const MeasurePtr& m);

// One weighted evaluation point of a measure: integration against f means
// sum of w * f(p). Smooth parts contribute quadrature nodes with
// w = (GL weights) * psi(u) * sqrt(det g); TConv parts contribute the
// product stream with the phase phi_k folded into w.
struct WeightedNode {
    cplx w;
    PhasePoint p;
};

struct StreamOptions {
    QuadSpec curve_quad{64, 8};  // per parameter dimension, m = 1 charts
    QuadSpec surface_quad{2, 4}; // per parameter dimension, m >= 2 charts
    // Cap on the product of child node counts in a direct tconv stream.
    // 2^27 admits three default curve streams (512^3) and nothing bigger.
    long tconv_budget = 1L << 27;
};

std::vector<WeightedNode> measure_stream(const MeasurePtr& m, const StreamOptions& opt);
std::vector<WeightedNode> smooth_stream(const SmoothMeasureSpec& spec, const StreamOptions& opt);

// integral of f psi dsigma over one smooth patch.
cplx measure_integral(const SmoothMeasureSpec& spec,
                      const std::function<cplx(const PhasePoint&)>& f,
                      const StreamOptions& opt = {});

// sum of |w| over the stream: the discretized total variation.
double total_variation(const std::vector<WeightedNode>& stream);

// Measure files: {"n": int, "measure": node}; node kinds dirac | smooth |
// reflect | tconv | sum. Unknown keys are rejected.
MeasurePtr measure_from_json(const nlohmann::json& file);

} // namespace weyl
