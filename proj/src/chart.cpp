#include "weyl/chart.hpp"

#include <cmath>

#include <Eigen/SVD>
#include <json.hpp>

namespace weyl {

using nlohmann::json;

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

double num_or(const json& j, const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_number())
        throw ConfigError(std::string("curve parameter \"") + key + "\" must be a number");
    return j.at(key).get<double>();
}

Eigen::Vector2d vec2_or(const json& j, const char* key, double dx, double dy) {
    if (!j.contains(key)) return {dx, dy};
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(std::string("curve parameter \"") + key +
                          "\" must be an array of two numbers");
    return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<double> coeffs_or(const json& j, const char* key,
                              std::vector<double> dflt) {
    if (!j.contains(key)) return dflt;
    const json& v = j.at(key);
    if (!v.is_array() || v.empty())
        throw ConfigError(std::string("curve parameter \"") + key +
                          "\" must be a non-empty array of numbers");
    std::vector<double> c;
    for (const auto& e : v) {
        if (!e.is_number())
            throw ConfigError(std::string("curve parameter \"") + key +
                              "\" must contain numbers only");
        c.push_back(e.get<double>());
    }
    return c;
}

// d-th derivative of a polynomial with coefficients c (ascending powers).
double poly_deriv(const std::vector<double>& c, double t, int d) {
    double acc = 0.0;
    for (int i = static_cast<int>(c.size()) - 1; i >= d; --i) {
        double f = 1.0;
        for (int q = 0; q < d; ++q) f *= (i - q);
        acc = acc * t + c[i] * f;
    }
    // Horner above walks descending powers of t^{i-d}.
    return acc;
}

Chart planar_curve(std::string name, double lo, double hi, bool periodic,
                   std::function<PhasePoint(double, int)> deriv) {
    Chart c;
    c.name = std::move(name);
    c.m = 1;
    c.n = 1;
    c.domain = {{lo, hi}};
    c.periodic = {periodic};
    c.eval = [deriv](const Eigen::VectorXd& u) { return deriv(u[0], 0); };
    c.jet = [deriv](const Eigen::VectorXd& u, int d) {
        if (d < 0)
            throw ConfigError("jet order must be >= 0");
        std::vector<PhasePoint> out;
        out.reserve(d + 1);
        for (int q = 0; q <= d; ++q) out.push_back(deriv(u[0], q));
        return out;
    };
    return c;
}

} // namespace

PhasePoint curve_velocity(const Chart& c, double s) {
    if (c.m != 1)
        throw ConfigError("curve_velocity: chart is not a curve");
    Eigen::VectorXd u(1);
    u[0] = s;
    return c.jet(u, 1)[1];
}

double riemannian_factor(const Chart& c, const Eigen::VectorXd& u) {
    std::vector<PhasePoint> jets = c.jet(u, 1);
    Eigen::MatrixXd jac(2 * c.n, c.m);
    for (int i = 0; i < c.m; ++i) {
        jac.col(i).head(c.n) = jets[1 + i].x;
        jac.col(i).tail(c.n) = jets[1 + i].y;
    }
    if (c.m == 1) {
        double s = jac.col(0).norm();
        if (s <= 0.0)
            throw NumericError("chart \"" + c.name + "\" has vanishing velocity at a node");
        return s;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const auto& sv = svd.singularValues();
    if (sv[c.m - 1] < 1e-10 * sv[0]) {
        std::string at = "(";
        for (int i = 0; i < u.size(); ++i)
            at += (i ? "," : "") + std::to_string(u[i]);
        throw NumericError("chart \"" + c.name + "\" is rank-deficient at node " + at + ")");
    }
    double det = 1.0;
    for (int i = 0; i < c.m; ++i) det *= sv[i];
    return det;
}

Chart reflect_chart(const Chart& c) {
    Chart r = c;
    r.name = "reflect(" + c.name + ")";
    auto ev = c.eval;
    auto jt = c.jet;
    r.eval = [ev](const Eigen::VectorXd& u) { return -ev(u); };
    r.jet = [jt](const Eigen::VectorXd& u, int d) {
        std::vector<PhasePoint> out = jt(u, d);
        for (auto& p : out) p = -p;
        return out;
    };
    return r;
}

Chart curve_catalog(const std::string& name, const json& params) {
    if (name == "circle") {
        check_keys(params, {"name", "r", "center"}, "circle");
        const double r = num_or(params, "r", 1.0);
        const Eigen::Vector2d c = vec2_or(params, "center", 0.0, 0.0);
        return planar_curve("circle", 0.0, 2.0 * M_PI, true, [r, c](double th, int q) {
            if (q == 0)
                return PhasePoint(c[0] + r * std::cos(th), c[1] + r * std::sin(th));
            return PhasePoint(r * std::cos(th + q * M_PI_2), r * std::sin(th + q * M_PI_2));
        });
    }
    if (name == "ellipse") {
        check_keys(params, {"name", "a", "b", "center"}, "ellipse");
        const double a = num_or(params, "a", 2.0);
        const double b = num_or(params, "b", 1.0);
        const Eigen::Vector2d c = vec2_or(params, "center", 0.0, 0.0);
        return planar_curve("ellipse", 0.0, 2.0 * M_PI, true, [a, b, c](double th, int q) {
            const double off = (q == 0) ? 0.0 : q * M_PI_2;
            PhasePoint p(a * std::cos(th + off), b * std::sin(th + off));
            if (q == 0) {
                p.x[0] += c[0];
                p.y[0] += c[1];
            }
            return p;
        });
    }
    if (name == "line_segment") {
        check_keys(params, {"name", "a", "b"}, "line_segment");
        const Eigen::Vector2d a = vec2_or(params, "a", -1.0, 0.0);
        const Eigen::Vector2d b = vec2_or(params, "b", 1.0, 0.0);
        return planar_curve("line_segment", 0.0, 1.0, false, [a, b](double t, int q) {
            if (q == 0)
                return PhasePoint(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]));
            if (q == 1) return PhasePoint(b[0] - a[0], b[1] - a[1]);
            return PhasePoint(0.0, 0.0);
        });
    }
    if (name == "parabola_arc") {
        check_keys(params, {"name", "half_width"}, "parabola_arc");
        const double w = num_or(params, "half_width", 1.0);
        return planar_curve("parabola_arc", -w, w, false, [](double t, int q) {
            if (q == 0) return PhasePoint(t, t * t);
            if (q == 1) return PhasePoint(1.0, 2.0 * t);
            if (q == 2) return PhasePoint(0.0, 2.0);
            return PhasePoint(0.0, 0.0);
        });
    }
    if (name == "cubic_arc") {
        check_keys(params, {"name"}, "cubic_arc");
        return planar_curve("cubic_arc", -1.0, 1.0, false, [](double t, int q) {
            if (q == 0) return PhasePoint(t, t * t * t);
            if (q == 1) return PhasePoint(1.0, 3.0 * t * t);
            if (q == 2) return PhasePoint(0.0, 6.0 * t);
            if (q == 3) return PhasePoint(0.0, 6.0);
            return PhasePoint(0.0, 0.0);
        });
    }
    if (name == "polynomial_curve") {
        check_keys(params, {"name", "coeff_x", "coeff_y", "t_min", "t_max"},
                   "polynomial_curve");
        const std::vector<double> cx = coeffs_or(params, "coeff_x", {0.0, 1.0});
        const std::vector<double> cy = coeffs_or(params, "coeff_y", {0.0, 0.0, 1.0});
        const double lo = num_or(params, "t_min", -1.0);
        const double hi = num_or(params, "t_max", 1.0);
        if (!(lo < hi))
            throw ConfigError("polynomial_curve: need t_min < t_max");
        return planar_curve("polynomial_curve", lo, hi, false, [cx, cy](double t, int q) {
            return PhasePoint(poly_deriv(cx, t, q), poly_deriv(cy, t, q));
        });
    }
    if (name == "sphere3") {
        check_keys(params, {"name", "r"}, "sphere3");
        const double r = num_or(params, "r", 1.0);
        Chart c;
        c.name = "sphere3";
        c.m = 3;
        c.n = 2;
        c.domain = {{0.0, M_PI}, {0.0, M_PI}, {0.0, 2.0 * M_PI}};
        c.periodic = {false, false, true};
        auto embed = [r](const Eigen::VectorXd& u, int part) {
            // part 0: the point; 1..3: the partial in u[part-1].
            const double s1 = std::sin(u[0]), c1 = std::cos(u[0]);
            const double s2 = std::sin(u[1]), c2 = std::cos(u[1]);
            const double s3 = std::sin(u[2]), c3 = std::cos(u[2]);
            Eigen::Vector4d p;
            switch (part) {
                case 0: p << c1, s1 * c2, s1 * s2 * c3, s1 * s2 * s3; break;
                case 1: p << -s1, c1 * c2, c1 * s2 * c3, c1 * s2 * s3; break;
                case 2: p << 0.0, -s1 * s2, s1 * c2 * c3, s1 * c2 * s3; break;
                case 3: p << 0.0, 0.0, -s1 * s2 * s3, s1 * s2 * c3; break;
            }
            p *= r;
            return PhasePoint(p.head<2>(), p.tail<2>());
        };
        c.eval = [embed](const Eigen::VectorXd& u) { return embed(u, 0); };
        c.jet = [embed](const Eigen::VectorXd& u, int d) {
            if (d != 1)
                throw ConfigError("sphere3: only order-1 jets are available");
            std::vector<PhasePoint> out;
            for (int part = 0; part <= 3; ++part) out.push_back(embed(u, part));
            return out;
        };
        return c;
    }
    throw ConfigError("unknown curve \"" + name +
                      "\"; catalog: circle, ellipse, line_segment, parabola_arc, "
                      "cubic_arc, polynomial_curve, sphere3");
}

Chart chart_from_json(const json& spec) {
    if (!spec.is_object() || !spec.contains("name") || !spec.at("name").is_string())
        throw ConfigError("curve spec must be an object with a \"name\" string");
    return curve_catalog(spec.at("name").get<std::string>(), spec);
}

} // namespace weyl
