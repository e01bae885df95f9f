#include "weyl/measure.hpp"

#include <cmath>

#include <json.hpp>

namespace weyl {

using nlohmann::json;

Density density_constant(double value) {
    return Density{"constant(" + std::to_string(value) + ")",
                   [value](const Eigen::VectorXd&) { return value; }};
}

Density density_bump(Eigen::VectorXd center, double radius, double amplitude) {
    if (radius <= 0.0)
        throw ConfigError("bump density: radius must be positive");
    return Density{"bump",
                   [center, radius, amplitude](const Eigen::VectorXd& u) {
                       if (u.size() != center.size())
                           throw ConfigError("bump density: parameter dimension mismatch");
                       const double s2 = (u - center).squaredNorm() / (radius * radius);
                       if (s2 >= 1.0) return 0.0;
                       return amplitude * std::exp(1.0 - 1.0 / (1.0 - s2));
                   }};
}

Density density_poly(std::vector<double> coeffs) {
    if (coeffs.empty())
        throw ConfigError("polynomial density: empty coefficient list");
    return Density{"poly",
                   [coeffs](const Eigen::VectorXd& u) {
                       if (u.size() != 1)
                           throw ConfigError("polynomial density: curves only");
                       double acc = 0.0;
                       for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
                           acc = acc * u[0] + *it;
                       return acc;
                   }};
}

namespace {

MeasurePtr wrap(int n, MeasureExpr::Dirac d) {
    auto e = std::make_shared<MeasureExpr>();
    e->n = n;
    e->node = std::move(d);
    return e;
}
template <typename Node>
MeasurePtr wrap(int n, Node node) {
    auto e = std::make_shared<MeasureExpr>();
    e->n = n;
    e->node = std::move(node);
    return e;
}

} // namespace

MeasurePtr make_dirac(PhasePoint p) {
    int n = p.n();
    return wrap(n, MeasureExpr::Dirac{std::move(p)});
}

MeasurePtr make_smooth(SmoothMeasureSpec spec) {
    int n = spec.chart.n;
    return wrap(n, MeasureExpr::Smooth{std::move(spec)});
}

MeasurePtr make_reflect(MeasurePtr child) {
    if (!child) throw ConfigError("reflect: missing child");
    int n = child->n;
    return wrap(n, MeasureExpr::Reflect{std::move(child)});
}

MeasurePtr make_tconv(std::vector<MeasurePtr> children) {
    if (children.size() < 2)
        throw ConfigError("tconv: needs at least two children");
    int n = children.front()->n;
    for (const auto& c : children)
        if (c->n != n) throw ConfigError("tconv: children disagree on dimension n");
    return wrap(n, MeasureExpr::TConv{std::move(children)});
}

MeasurePtr make_sum(std::vector<std::pair<cplx, MeasurePtr>> terms) {
    if (terms.empty())
        throw ConfigError("sum: needs at least one term");
    int n = terms.front().second->n;
    for (const auto& t : terms)
        if (t.second->n != n) throw ConfigError("sum: terms disagree on dimension n");
    return wrap(n, MeasureExpr::Sum{std::move(terms)});
}

MeasurePtr reflect_measure(const MeasurePtr& m) {
    if (!m) throw ConfigError("reflect_measure: null measure");
    return std::visit(
        [&](const auto& node) -> MeasurePtr {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, MeasureExpr::Dirac>) {
                return make_dirac(-node.p);
            } else if constexpr (std::is_same_v<T, MeasureExpr::Smooth>) {
                SmoothMeasureSpec s{reflect_chart(node.spec.chart), node.spec.density};
                return make_smooth(std::move(s));
            } else if constexpr (std::is_same_v<T, MeasureExpr::Reflect>) {
                return normalize_reflections(node.child);
            } else if constexpr (std::is_same_v<T, MeasureExpr::TConv>) {
                std::vector<MeasurePtr> rev;
                for (auto it = node.children.rbegin(); it != node.children.rend(); ++it)
                    rev.push_back(reflect_measure(*it));
                return make_tconv(std::move(rev));
            } else {
                std::vector<std::pair<cplx, MeasurePtr>> terms;
                for (const auto& [w, c] : node.terms)
                    terms.emplace_back(std::conj(w), reflect_measure(c));
                return make_sum(std::move(terms));
            }
        },
        m->node);
}

MeasurePtr normalize_reflections(const MeasurePtr& m) {
    if (!m) throw ConfigError("normalize_reflections: null measure");
    return std::visit(
        [&](const auto& node) -> MeasurePtr {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, MeasureExpr::Reflect>) {
                return reflect_measure(normalize_reflections(node.child));
            } else if constexpr (std::is_same_v<T, MeasureExpr::TConv>) {
                std::vector<MeasurePtr> ch;
                for (const auto& c : node.children) ch.push_back(normalize_reflections(c));
                return make_tconv(std::move(ch));
            } else if constexpr (std::is_same_v<T, MeasureExpr::Sum>) {
                std::vector<std::pair<cplx, MeasurePtr>> terms;
                for (const auto& [w, c] : node.terms)
                    terms.emplace_back(w, normalize_reflections(c));
                return make_sum(std::move(terms));
            } else {
                return m;
            }
        },
        m->node);
}

std::vector<WeightedNode> smooth_stream(const SmoothMeasureSpec& spec,
                                        const StreamOptions& opt) {
    const Chart& c = spec.chart;
    const QuadSpec& qs = (c.m == 1) ? opt.curve_quad : opt.surface_quad;
    std::vector<Quad1D> rules;
    for (int d = 0; d < c.m; ++d)
        rules.push_back(composite_gauss_legendre(c.domain[d][0], c.domain[d][1],
                                                 qs.panels, qs.order));
    std::vector<WeightedNode> out;
    std::vector<int> ix(c.m, 0);
    Eigen::VectorXd u(c.m);
    while (true) {
        double w = 1.0;
        for (int d = 0; d < c.m; ++d) {
            u[d] = rules[d].nodes[ix[d]];
            w *= rules[d].weights[ix[d]];
        }
        const double psi = spec.density.eval(u);
        if (!std::isfinite(psi))
            throw NumericError("measure density is not finite at a quadrature node");
        if (psi != 0.0) {
            const double vol = riemannian_factor(c, u);
            if (!std::isfinite(vol))
                throw NumericError("chart volume factor is not finite at a quadrature node");
            out.push_back({cplx(w * psi * vol, 0.0), c.eval(u)});
        }
        int d = c.m - 1;
        while (d >= 0 && ix[d] + 1 == rules[d].nodes.size()) ix[d--] = 0;
        if (d < 0) break;
        ++ix[d];
    }
    return out;
}

namespace {

void tconv_stream_rec(const std::vector<std::vector<WeightedNode>>& parts, size_t level,
                      const PhasePoint& sum, cplx w, std::vector<WeightedNode>& out) {
    if (level == parts.size()) {
        out.push_back({w, sum});
        return;
    }
    for (const WeightedNode& node : parts[level]) {
        // phi_k recursion: multiply by e^{pi i sigma(S_{k-1}, p_k)} where
        // S_{k-1} is the sum of the points already chosen.
        cplx phase = (level == 0) ? cplx(1.0, 0.0) : phase_phi_2(sum, node.p);
        tconv_stream_rec(parts, level + 1,
                         level == 0 ? node.p : sum + node.p,
                         w * node.w * phase, out);
    }
}

} // namespace

std::vector<WeightedNode> measure_stream(const MeasurePtr& m, const StreamOptions& opt) {
    MeasurePtr nm = normalize_reflections(m);
    return std::visit(
        [&](const auto& node) -> std::vector<WeightedNode> {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, MeasureExpr::Dirac>) {
                return {WeightedNode{cplx(1.0, 0.0), node.p}};
            } else if constexpr (std::is_same_v<T, MeasureExpr::Smooth>) {
                return smooth_stream(node.spec, opt);
            } else if constexpr (std::is_same_v<T, MeasureExpr::Sum>) {
                std::vector<WeightedNode> out;
                for (const auto& [w, c] : node.terms) {
                    std::vector<WeightedNode> part = measure_stream(c, opt);
                    for (auto& p : part) out.push_back({w * p.w, p.p});
                }
                return out;
            } else if constexpr (std::is_same_v<T, MeasureExpr::TConv>) {
                std::vector<std::vector<WeightedNode>> parts;
                long total = 1;
                for (const auto& c : node.children) {
                    if (!std::holds_alternative<MeasureExpr::Dirac>(c->node) &&
                        !std::holds_alternative<MeasureExpr::Smooth>(c->node))
                        throw NumericError(
                            "tconv direct mode: children must be dirac or smooth "
                            "(flatten nested tconv, or use \"product\" mode)");
                    parts.push_back(measure_stream(c, opt));
                    total *= static_cast<long>(parts.back().size());
                    if (total > opt.tconv_budget)
                        throw NumericError(
                            "tconv direct mode: node-product budget exceeded; "
                            "use \"product\" mode (W(mu nat nu) = W(mu) W(nu), so the "
                            "factors can be transformed separately and multiplied)");
                }
                std::vector<WeightedNode> out;
                out.reserve(static_cast<size_t>(total));
                tconv_stream_rec(parts, 0, PhasePoint(Eigen::VectorXd::Zero(nm->n),
                                                      Eigen::VectorXd::Zero(nm->n)),
                                 cplx(1.0, 0.0), out);
                return out;
            } else {
                throw NumericError("measure_stream: unexpected reflect node");
            }
        },
        nm->node);
}

cplx measure_integral(const SmoothMeasureSpec& spec,
                      const std::function<cplx(const PhasePoint&)>& f,
                      const StreamOptions& opt) {
    cplx acc(0.0, 0.0);
    for (const WeightedNode& node : smooth_stream(spec, opt)) {
        cplx v = f(node.p);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericError("measure_integral: integrand not finite at a node");
        acc += node.w * v;
    }
    return acc;
}

double total_variation(const std::vector<WeightedNode>& stream) {
    double tv = 0.0;
    for (const auto& node : stream) tv += std::abs(node.w);
    return tv;
}

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            throw ConfigError(ctx + ": unknown key \"" + it.key() + "\"");
    }
}

Density density_from_json(const json& j, int m) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw ConfigError("density: must be an object with a \"kind\" string");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
        check_keys(j, {"kind", "value"}, "density constant");
        return density_constant(j.contains("value") ? j.at("value").get<double>() : 1.0);
    }
    if (kind == "bump") {
        check_keys(j, {"kind", "center", "radius", "amplitude"}, "density bump");
        if (!j.contains("center") || !j.at("center").is_array() ||
            j.at("center").size() != static_cast<size_t>(m))
            throw ConfigError("density bump: \"center\" must have one entry per parameter");
        Eigen::VectorXd c(m);
        for (int i = 0; i < m; ++i) c[i] = j.at("center")[i].get<double>();
        return density_bump(c, j.contains("radius") ? j.at("radius").get<double>() : 1.0,
                            j.contains("amplitude") ? j.at("amplitude").get<double>() : 1.0);
    }
    if (kind == "poly") {
        check_keys(j, {"kind", "coeffs"}, "density poly");
        if (m != 1)
            throw ConfigError("density poly: curves only");
        if (!j.contains("coeffs"))
            throw ConfigError("density poly: missing \"coeffs\"");
        return density_poly(j.at("coeffs").get<std::vector<double>>());
    }
    throw ConfigError("density: unknown kind \"" + kind +
                      "\" (constant, bump, poly)");
}

MeasurePtr node_from_json(const json& j, int n) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw ConfigError("measure node: must be an object with a \"kind\" string");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "dirac") {
        check_keys(j, {"kind", "point"}, "dirac node");
        if (!j.contains("point") || !j.at("point").is_array() ||
            j.at("point").size() != static_cast<size_t>(2 * n))
            throw ConfigError("dirac node: \"point\" must be an array of 2n numbers "
                              "(x components then y components)");
        Eigen::VectorXd x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = j.at("point")[i].get<double>();
            y[i] = j.at("point")[n + i].get<double>();
        }
        return make_dirac(PhasePoint(x, y));
    }
    if (kind == "smooth") {
        check_keys(j, {"kind", "curve", "density"}, "smooth node");
        if (!j.contains("curve"))
            throw ConfigError("smooth node: missing \"curve\"");
        Chart chart = chart_from_json(j.at("curve"));
        if (chart.n != n)
            throw ConfigError("smooth node: curve \"" + chart.name +
                              "\" lives in n=" + std::to_string(chart.n) +
                              ", file declares n=" + std::to_string(n));
        Density den = j.contains("density") ? density_from_json(j.at("density"), chart.m)
                                            : density_constant(1.0);
        return make_smooth(SmoothMeasureSpec{std::move(chart), std::move(den)});
    }
    if (kind == "reflect") {
        check_keys(j, {"kind", "child"}, "reflect node");
        if (!j.contains("child"))
            throw ConfigError("reflect node: missing \"child\"");
        return make_reflect(node_from_json(j.at("child"), n));
    }
    if (kind == "tconv") {
        check_keys(j, {"kind", "children"}, "tconv node");
        if (!j.contains("children") || !j.at("children").is_array() ||
            j.at("children").size() < 2)
            throw ConfigError("tconv node: \"children\" must be an array of >= 2 nodes");
        std::vector<MeasurePtr> ch;
        for (const auto& c : j.at("children")) ch.push_back(node_from_json(c, n));
        return make_tconv(std::move(ch));
    }
    if (kind == "sum") {
        check_keys(j, {"kind", "terms"}, "sum node");
        if (!j.contains("terms") || !j.at("terms").is_array() || j.at("terms").empty())
            throw ConfigError("sum node: \"terms\" must be a non-empty array");
        std::vector<std::pair<cplx, MeasurePtr>> terms;
        for (const auto& t : j.at("terms")) {
            check_keys(t, {"w", "child"}, "sum term");
            if (!t.contains("w") || !t.at("w").is_array() || t.at("w").size() != 2)
                throw ConfigError("sum term: \"w\" must be [re, im]");
            if (!t.contains("child"))
                throw ConfigError("sum term: missing \"child\"");
            cplx w(t.at("w")[0].get<double>(), t.at("w")[1].get<double>());
            terms.emplace_back(w, node_from_json(t.at("child"), n));
        }
        return make_sum(std::move(terms));
    }
    throw ConfigError("measure node: unknown kind \"" + kind +
                      "\" (dirac, smooth, reflect, tconv, sum)");
}

} // namespace

MeasurePtr measure_from_json(const json& file) {
    if (!file.is_object())
        throw ConfigError("measure file: top level must be an object");
    check_keys(file, {"n", "measure"}, "measure file");
    if (!file.contains("n") || !file.at("n").is_number_integer())
        throw ConfigError("measure file: missing integer \"n\"");
    const int n = file.at("n").get<int>();
    if (n < 1 || n > 2)
        throw ConfigError("measure file: n must be 1 or 2");
    if (!file.contains("measure"))
        throw ConfigError("measure file: missing \"measure\"");
    return node_from_json(file.at("measure"), n);
}

} // namespace weyl
