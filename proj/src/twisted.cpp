#include "weyl/twisted.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "weyl/weyl_transform.hpp"

namespace weyl {

cplx phase_phi_k(const PhaseChain& chain) {
    if (chain.empty())
        throw ConfigError("phase_phi_k: chain must hold at least one point");
    const int n = chain.front().n();
    Eigen::VectorXd sx = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sy = Eigen::VectorXd::Zero(n);
    cplx phi(1.0, 0.0);
    for (size_t k = 0; k < chain.size(); ++k) {
        const PhasePoint& p = chain[k];
        if (p.n() != n)
            throw ConfigError("phase_phi_k: points disagree on dimension n");
        if (k > 0) {
            phi *= std::polar(1.0, std::numbers::pi *
                                       (sx.dot(p.y) - sy.dot(p.x)));
            phi /= std::abs(phi);
        }
        sx += p.x;
        sy += p.y;
    }
    return phi;
}

OperatorMatrix tconv_weyl_direct(const std::vector<MeasurePtr>& children,
                                 const BasisTruncation& trunc,
                                 const RhoOptions& rho_opt,
                                 const StreamOptions& stream_opt, int threads) {
    // make_tconv + measure_stream enforce the direct-mode preconditions:
    // Dirac/Smooth children only and the node-product budget.
    std::vector<WeightedNode> stream = measure_stream(make_tconv(children), stream_opt);
    return accumulate_stream(stream, trunc, rho_opt, threads);
}

namespace {

struct CurveCache {
    const Chart* chart = nullptr;
    const Density* density = nullptr;
    double lo = 0.0, hi = 0.0, len = 0.0, step = 0.0;
    bool periodic = false;
    std::vector<double> centers;
    std::vector<double> px, py;  // curve point at each center
    double max_speed = 0.0;

    double wrap(double s) const {
        if (!periodic) return s;
        double r = std::fmod(s - lo, len);
        if (r < 0.0) r += len;
        return lo + r;
    }
    bool in_domain(double s) const {
        if (periodic) return true;
        const double slack = 1e-9 * len;
        return s >= lo - slack && s <= hi + slack;
    }
};

CurveCache build_cache(const SmoothMeasureSpec& spec, int grid, const char* side) {
    const Chart& c = spec.chart;
    if (c.m != 1 || c.n != 1)
        throw ConfigError(std::string("tconv_density: ") + side +
                          " must be a curve in the plane (m = 1, n = 1), got \"" +
                          c.name + "\"");
    CurveCache cc;
    cc.chart = &c;
    cc.density = &spec.density;
    cc.lo = c.domain[0][0];
    cc.hi = c.domain[0][1];
    cc.len = cc.hi - cc.lo;
    cc.step = cc.len / grid;
    cc.periodic = c.periodic[0];
    cc.centers.resize(grid);
    cc.px.resize(grid);
    cc.py.resize(grid);
    Eigen::VectorXd u(1);
    for (int i = 0; i < grid; ++i) {
        cc.centers[i] = cc.lo + (i + 0.5) * cc.step;
        u[0] = cc.centers[i];
        std::vector<PhasePoint> jet = c.jet(u, 1);
        cc.px[i] = jet[0].x[0];
        cc.py[i] = jet[0].y[0];
        cc.max_speed = std::max(cc.max_speed,
                                std::hypot(jet[1].x[0], jet[1].y[0]));
    }
    if (cc.max_speed == 0.0)
        throw NumericError("tconv_density: curve \"" + c.name +
                           "\" has vanishing velocity on the whole seed grid");
    return cc;
}

struct Root {
    double s = 0.0, t = 0.0;
};

double param_dist(const CurveCache& cc, double u, double v) {
    double d = std::abs(u - v);
    if (cc.periodic) d = std::min(d, cc.len - d);
    return d;
}

} // namespace

DensitySample tconv_density(const SmoothMeasureSpec& a, const SmoothMeasureSpec& b,
                            const PhasePoint& z, const DensityOptions& opt) {
    if (z.n() != 1)
        throw ConfigError("tconv_density: z must lie in the plane (n = 1)");
    if (opt.seed_grid < 2)
        throw ConfigError("tconv_density: seed grid must have at least 2 cells");

    const int G = opt.seed_grid;
    CurveCache ca = build_cache(a, G, "first measure");
    CurveCache cb = build_cache(b, G, "second measure");

    const double zx = z.x[0], zy = z.y[0];
    const double eps_j = opt.eps_j_rel * ca.max_speed * cb.max_speed;
    // Largest possible |S - z| drift from a cell center to anywhere in the
    // cell, doubled for safety: cells farther out cannot contain a root.
    const double seed_radius =
        ca.max_speed * ca.step + cb.max_speed * cb.step;
    const double accept_radius =
        opt.residual_tol * (1.0 + std::hypot(zx, zy));

    std::vector<Root> roots;
    Eigen::VectorXd ua(1), ub(1);
    for (int i = 0; i < G; ++i) {
        for (int j = 0; j < G; ++j) {
            const double fx0 = ca.px[i] + cb.px[j] - zx;
            const double fy0 = ca.py[i] + cb.py[j] - zy;
            if (std::hypot(fx0, fy0) > seed_radius) continue;

            double s = ca.centers[i], t = cb.centers[j];
            bool converged = false;
            for (int it = 0; it < opt.newton_max; ++it) {
                ua[0] = s;
                ub[0] = t;
                std::vector<PhasePoint> ja = ca.chart->jet(ua, 1);
                std::vector<PhasePoint> jb = cb.chart->jet(ub, 1);
                const double fx = ja[0].x[0] + jb[0].x[0] - zx;
                const double fy = ja[0].y[0] + jb[0].y[0] - zy;
                const double axs = ja[1].x[0], ays = ja[1].y[0];
                const double bxs = jb[1].x[0], bys = jb[1].y[0];
                const double det = axs * bys - ays * bxs;
                if (std::abs(det) < 1e-300) break;
                const double ds = (bxs * fy - bys * fx) / det;
                const double dt = (ays * fx - axs * fy) / det;
                s = ca.wrap(s + ds);
                t = cb.wrap(t + dt);
                if (std::max(std::abs(ds), std::abs(dt)) <= opt.step_tol) {
                    converged = true;
                    break;
                }
            }
            if (!converged || !ca.in_domain(s) || !cb.in_domain(t)) continue;
            ua[0] = s;
            ub[0] = t;
            PhasePoint pa = ca.chart->eval(ua);
            PhasePoint pb = cb.chart->eval(ub);
            if (std::hypot(pa.x[0] + pb.x[0] - zx, pa.y[0] + pb.y[0] - zy) >
                accept_radius)
                continue;
            bool dup = false;
            for (const Root& r : roots)
                if (param_dist(ca, r.s, s) <= opt.dedup_radius &&
                    param_dist(cb, r.t, t) <= opt.dedup_radius) {
                    dup = true;
                    break;
                }
            if (!dup) roots.push_back({s, t});
        }
    }

    DensitySample out;
    out.z = z;
    out.roots_found = static_cast<int>(roots.size());
    for (const Root& r : roots) {
        ua[0] = r.s;
        ub[0] = r.t;
        std::vector<PhasePoint> ja = ca.chart->jet(ua, 1);
        std::vector<PhasePoint> jb = cb.chart->jet(ub, 1);
        const double axs = ja[1].x[0], ays = ja[1].y[0];
        const double bxs = jb[1].x[0], bys = jb[1].y[0];
        const double det = axs * bys - ays * bxs;
        const double sa = std::hypot(axs, ays);
        const double sb = std::hypot(bxs, bys);
        if (std::abs(det) < eps_j) {
            std::ostringstream msg;
            msg << "tconv_density: near-critical fiber point (s = " << r.s
                << ", t = " << r.t << "): |det J| = " << std::abs(det)
                << " is below the exclusion threshold " << eps_j
                << "; the density may be unbounded near z";
            throw NumericError(msg.str());
        }
        out.value += phase_phi_2(ja[0], jb[0]) * ca.density->eval(ua) *
                     cb.density->eval(ub) * (sa * sb / std::abs(det));
        out.nearest_critical_distance =
            std::min(out.nearest_critical_distance, std::abs(det) / (sa * sb));
    }
    return out;
}

cplx pairing_oracle(const MeasurePtr& a, const MeasurePtr& b,
                    const std::function<cplx(const PhasePoint&)>& g,
                    const StreamOptions& opt) {
    std::vector<WeightedNode> sa = measure_stream(a, opt);
    std::vector<WeightedNode> sb = measure_stream(b, opt);
    cplx acc(0.0, 0.0);
    for (const WeightedNode& na : sa) {
        cplx row(0.0, 0.0);
        for (const WeightedNode& nb : sb) {
            cplx v = g(na.p + nb.p);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw NumericError("pairing_oracle: test function not finite at a node");
            row += nb.w * phase_phi_2(na.p, nb.p) * v;
        }
        acc += na.w * row;
    }
    return acc;
}

double critical_set_area(const Chart& a, const Chart& b, double eta, int grid) {
    if (a.m != 1 || b.m != 1)
        throw ConfigError("critical_set_area: both charts must be curves");
    if (eta <= 0.0)
        throw ConfigError("critical_set_area: eta must be positive");
    if (grid < 2)
        throw ConfigError("critical_set_area: grid must have at least 2 cells");

    const double la = a.domain[0][1] - a.domain[0][0];
    const double lb = b.domain[0][1] - b.domain[0][0];
    std::vector<PhasePoint> va(grid), vb(grid);
    for (int i = 0; i < grid; ++i) {
        va[i] = curve_velocity(a, a.domain[0][0] + (i + 0.5) * la / grid);
        vb[i] = curve_velocity(b, b.domain[0][0] + (i + 0.5) * lb / grid);
    }
    long hits = 0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const double dm = std::hypot((va[i].x - vb[j].x).norm(),
                                         (va[i].y - vb[j].y).norm());
            const double dp = std::hypot((va[i].x + vb[j].x).norm(),
                                         (va[i].y + vb[j].y).norm());
            if (std::min(dm, dp) < eta) ++hits;
        }
    return la * lb * static_cast<double>(hits) /
           (static_cast<double>(grid) * grid);
}

} // namespace weyl
