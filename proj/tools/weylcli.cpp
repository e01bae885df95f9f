#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "weyl/config.hpp"
#include "weyl/geometry.hpp"

using namespace weyl;
using nlohmann::json;

namespace {

// Uniform double in [-1, 1) from the top 53 bits; avoids
// std::uniform_real_distribution, whose output is not pinned by the
// standard, so seeded runs stay reproducible everywhere.
double uniform_pm1(std::mt19937_64& rng) {
    return 2.0 * ((rng() >> 11) * 0x1p-53) - 1.0;
}

void write_header(std::ostream& os, const ExperimentConfig& cfg,
                  const std::string& command) {
    os << "# version " << kVersion << "\n"
       << "# ordering " << kOrderingVersion << "\n"
       << "# command " << command << "\n"
       << "# config_hash " << std::hex << std::setw(16) << std::setfill('0')
       << config_hash(cfg) << std::dec << std::setfill(' ') << "\n"
       << "# seed " << cfg.seed << "\n";
}

json header_json(const ExperimentConfig& cfg, const std::string& command) {
    std::ostringstream hash;
    hash << std::hex << std::setw(16) << std::setfill('0') << config_hash(cfg);
    return json{{"version", kVersion},
                {"ordering", kOrderingVersion},
                {"command", command},
                {"config_hash", hash.str()},
                {"seed", cfg.seed}};
}

MeasurePtr load_measure(const ExperimentConfig& cfg) {
    if (cfg.measure.empty())
        throw ConfigError("this command needs a measure file (config key "
                          "\"measure\" or flag --measure)");
    std::ifstream in(cfg.measure);
    if (!in)
        throw ConfigError("cannot open measure file \"" + cfg.measure + "\"");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("measure file \"" + cfg.measure +
                          "\": JSON parse error: " + e.what());
    }
    return measure_from_json(j);
}

std::ofstream open_out(const ExperimentConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out);
    const std::string path = cfg.out + "/" + name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write \"" + path + "\"");
    return os;
}

int cmd_matrix(const ExperimentConfig& cfg) {
    MeasurePtr m = load_measure(cfg);
    const BasisTruncation trunc{m->n, cfg.N};
    const OperatorMatrix w = weyl_matrix(m, trunc, weyl_options(cfg));

    std::ofstream os = open_out(cfg, "matrix.csv");
    write_header(os, cfg, "matrix");
    os << "# n " << trunc.n << "\n# N " << trunc.N << "\n";
    os << "j,k,re,im\n" << std::setprecision(17);
    for (long j = 0; j < w.m.rows(); ++j)
        for (long k = 0; k < w.m.cols(); ++k)
            os << j << ',' << k << ',' << w.m(j, k).real() << ','
               << w.m(j, k).imag() << '\n';
    std::cout << "matrix: " << w.m.rows() << "x" << w.m.cols() << " written to "
              << cfg.out << "/matrix.csv\n";
    return 0;
}

int cmd_scan(const ExperimentConfig& cfg) {
    MeasurePtr m = load_measure(cfg);
    const SpectrumReport report =
        compactness_scan(m, cfg.N_list, cfg.K, weyl_options(cfg), scan_thresholds(cfg));

    std::ofstream csv = open_out(cfg, "scan.csv");
    write_header(csv, cfg, "scan");
    spectrum_csv(report, csv);

    json j = header_json(cfg, "scan");
    j.update(spectrum_json(report));
    std::ofstream js = open_out(cfg, "scan.json");
    js << j.dump(2) << '\n';

    std::cout << "scan: trend " << report.trend << " over sizes";
    for (int N : report.sizes) std::cout << ' ' << N;
    std::cout << '\n';
    return 0;
}

struct SuiteResult {
    std::string name;
    double max_error = 0.0;
    double tol = 0.0;
    bool pass = false;
    json detail;
};

SuiteResult suite_unitarity(const ExperimentConfig& cfg) {
    SuiteResult r{"unitarity_blocks", 0.0, 1e-6, false, json::array()};
    const RhoOptions ropt = rho_options(cfg);
    const std::vector<std::pair<double, double>> points = {
        {1.0, 0.0}, {0.0, 1.0}, {0.7, -0.3}};
    const std::vector<int> sizes = {64, 128, 256};
    bool monotone = true;
    double final_max = 0.0;
    for (const auto& [x, y] : points) {
        double prev = std::numeric_limits<double>::infinity();
        for (int N : sizes) {
            const Eigen::MatrixXcd m = rho_matrix_1d(x, y, N, ropt);
            const Eigen::MatrixXcd defect =
                (m.adjoint() * m - Eigen::MatrixXcd::Identity(N, N))
                    .block(0, 0, 16, 16);
            const double err = defect.norm();
            // Non-increasing up to machine noise: once the defect sits at
            // the rounding floor (~1e-14) it may jitter upward slightly.
            if (err > prev * (1.0 + 1e-12) + 1e-12) monotone = false;
            prev = err;
            if (N == sizes.back()) final_max = std::max(final_max, err);
            r.detail.push_back({{"x", x}, {"y", y}, {"N", N}, {"error", err}});
        }
    }
    r.max_error = final_max;
    r.pass = monotone && final_max <= r.tol;
    r.detail.push_back({{"monotone", monotone}});
    return r;
}

SuiteResult suite_group_law(const ExperimentConfig& cfg) {
    SuiteResult r{"group_law_blocks", 0.0, 1e-5, false, json::array()};
    const RhoOptions ropt = rho_options(cfg);
    const int N = 256;
    std::mt19937_64 rng(cfg.seed);
    for (int trial = 0; trial < 5; ++trial) {
        const double x1 = uniform_pm1(rng), y1 = uniform_pm1(rng);
        const double x2 = uniform_pm1(rng), y2 = uniform_pm1(rng);
        const Eigen::MatrixXcd a = rho_matrix_1d(x1, y1, N, ropt);
        const Eigen::MatrixXcd b = rho_matrix_1d(x2, y2, N, ropt);
        const Eigen::MatrixXcd c = rho_matrix_1d(x1 + x2, y1 + y2, N, ropt);
        const cplx z = phase_phi_2(PhasePoint(x1, y1), PhasePoint(x2, y2));
        const double err = ((a * b - z * c).block(0, 0, 16, 16)).norm();
        r.max_error = std::max(r.max_error, err);
        r.detail.push_back(
            {{"x1", x1}, {"y1", y1}, {"x2", x2}, {"y2", y2}, {"error", err}});
    }
    r.pass = r.max_error <= r.tol;
    return r;
}

SuiteResult suite_adjoint(const ExperimentConfig& cfg) {
    SuiteResult r{"adjoint_catalog", 0.0, 1e-10, false, json::array()};
    const WeylOptions wopt = weyl_options(cfg);
    const std::vector<std::string> curves = {"circle",       "ellipse",
                                             "line_segment", "parabola_arc",
                                             "cubic_arc",    "polynomial_curve"};
    auto check = [&](const std::string& name, const Chart& chart, int N) {
        MeasurePtr m = make_smooth({chart, density_constant(1.0)});
        const BasisTruncation trunc{chart.n, N};
        const OperatorMatrix w = weyl_matrix(m, trunc, wopt);
        const OperatorMatrix wr = weyl_matrix(make_reflect(m), trunc, wopt);
        const double err = (wr.m - w.m.adjoint()).norm();
        r.max_error = std::max(r.max_error, err);
        r.detail.push_back({{"curve", name}, {"N", N}, {"error", err}});
    };
    for (const std::string& name : curves)
        check(name, curve_catalog(name, json::object()), 64);
    // n = 2 entry at the same matrix dimension (8^2 = 64).
    check("sphere3", curve_catalog("sphere3", json::object()), 8);
    r.pass = r.max_error <= r.tol;
    return r;
}

SuiteResult suite_phase_recursion(const ExperimentConfig& cfg) {
    SuiteResult r{"phase_recursion", 0.0, 1e-12, false, json::array()};
    std::mt19937_64 rng(cfg.seed + 1);
    for (int trial = 0; trial < 1000; ++trial) {
        PhasePoint p(uniform_pm1(rng), uniform_pm1(rng));
        PhasePoint q(uniform_pm1(rng), uniform_pm1(rng));
        PhasePoint s(uniform_pm1(rng), uniform_pm1(rng));
        const cplx lhs = phase_phi_k({p, q, s});
        const cplx rhs = phase_phi_2(p, q) * phase_phi_2(p + q, s);
        r.max_error = std::max(r.max_error, std::abs(lhs - rhs));
    }
    r.pass = r.max_error <= r.tol;
    r.detail.push_back({{"triples", 1000}});
    return r;
}

int cmd_verify(const ExperimentConfig& cfg) {
    const std::vector<SuiteResult> suites = {
        suite_unitarity(cfg), suite_group_law(cfg), suite_adjoint(cfg),
        suite_phase_recursion(cfg)};

    json j = header_json(cfg, "verify");
    j["suites"] = json::array();
    bool all_pass = true;
    std::ostringstream lines;
    for (const SuiteResult& s : suites) {
        all_pass = all_pass && s.pass;
        j["suites"].push_back({{"name", s.name},
                               {"max_error", s.max_error},
                               {"tol", s.tol},
                               {"pass", s.pass},
                               {"detail", s.detail}});
        lines << (s.pass ? "[PASS] " : "[FAIL] ") << s.name << "  max_error "
              << std::setprecision(6) << std::scientific << s.max_error
              << "  tol " << s.tol << std::defaultfloat << "\n";
    }
    j["pass"] = all_pass;

    std::ofstream os = open_out(cfg, "verify.json");
    os << j.dump(2) << '\n';
    std::cout << lines.str();
    std::cout << (all_pass ? "verify: all suites passed\n"
                           : "verify: FAILURES present\n");
    return all_pass ? 0 : 1;
}

int cmd_density(const ExperimentConfig& cfg) {
    MeasurePtr m = normalize_reflections(load_measure(cfg));
    const auto* conv = std::get_if<MeasureExpr::TConv>(&m->node);
    if (!conv || conv->children.size() != 2)
        throw ConfigError("density: measure must be a tconv of exactly two "
                          "smooth curve measures");
    const auto* sa = std::get_if<MeasureExpr::Smooth>(&conv->children[0]->node);
    const auto* sb = std::get_if<MeasureExpr::Smooth>(&conv->children[1]->node);
    if (!sa || !sb)
        throw ConfigError("density: both tconv children must be smooth measures");

    const DensityOptions dopt = density_options(cfg);
    const int G = cfg.density_grid;
    const double w = cfg.density_window;
    const double cell = 2.0 * w / G;

    std::ofstream csv = open_out(cfg, "density.csv");
    write_header(csv, cfg, "density");
    csv << "z_x,z_y,re,im,roots_found,nearest_critical_distance\n"
        << std::setprecision(17);

    // Cell-center samples; flagged cells get roots_found = -1 and are
    // excluded from the grid pairing below.
    std::vector<DensitySample> kept;
    long flagged = 0;
    for (int i = 0; i < G; ++i) {
        for (int jx = 0; jx < G; ++jx) {
            const PhasePoint z(-w + (jx + 0.5) * cell, -w + (i + 0.5) * cell);
            try {
                DensitySample s = tconv_density(*(&sa->spec), *(&sb->spec), z, dopt);
                csv << z.x[0] << ',' << z.y[0] << ',' << s.value.real() << ','
                    << s.value.imag() << ',' << s.roots_found << ','
                    << s.nearest_critical_distance << '\n';
                kept.push_back(std::move(s));
            } catch (const NumericError&) {
                ++flagged;
                csv << z.x[0] << ',' << z.y[0] << ",nan,nan,-1,0\n";
            }
        }
    }

    // Cross-check: integrate bumps against the sweep vs the double-stream
    // pairing of the same two measures.
    const StreamOptions sopt = stream_options(cfg);
    const std::vector<std::pair<double, double>> centers = {
        {1.0, 0.0}, {0.0, 1.2}, {-0.8, 0.5}};
    const double radius = 0.6;
    json summary = header_json(cfg, "density");
    summary["near_critical_cells"] = flagged;
    summary["grid"] = G;
    summary["window"] = w;
    summary["bumps"] = json::array();
    double worst = 0.0;
    for (const auto& [cx, cy] : centers) {
        Eigen::VectorXd c(2);
        c << cx, cy;
        const Density bump = density_bump(c, radius, 1.0);
        auto g = [&](const PhasePoint& p) {
            Eigen::VectorXd v(2);
            v << p.x[0], p.y[0];
            return cplx(bump.eval(v), 0.0);
        };
        cplx grid_sum(0.0, 0.0);
        for (const DensitySample& s : kept)
            grid_sum += s.value * g(s.z) * (cell * cell);
        const cplx paired =
            pairing_oracle(conv->children[0], conv->children[1], g, sopt);
        const double rel = std::abs(grid_sum - paired) /
                           std::max(std::abs(paired), 1e-300);
        worst = std::max(worst, rel);
        summary["bumps"].push_back({{"center", {cx, cy}},
                                    {"radius", radius},
                                    {"pairing", {paired.real(), paired.imag()}},
                                    {"grid", {grid_sum.real(), grid_sum.imag()}},
                                    {"rel_err", rel}});
    }
    summary["max_rel_err"] = worst;
    std::ofstream js = open_out(cfg, "density_summary.json");
    js << summary.dump(2) << '\n';
    std::cout << "density: " << G << "x" << G << " sweep, " << flagged
              << " near-critical cells, max pairing rel err "
              << std::setprecision(3) << std::scientific << worst << '\n';
    return 0;
}

int cmd_geometry(const ExperimentConfig& cfg) {
    json j = header_json(cfg, "geometry");
    j["curves"] = json::array();
    const std::vector<std::string> names = {"circle", "ellipse", "line_segment",
                                            "parabola_arc", "cubic_arc"};
    const int samples = 16;
    const int max_order = 8;
    for (const std::string& name : names) {
        const Chart chart = curve_catalog(name, json::object());
        const double lo = chart.domain[0][0], hi = chart.domain[0][1];
        std::vector<double> params;
        std::vector<Eigen::VectorXd> uparams;
        for (int i = 0; i < samples; ++i) {
            params.push_back(lo + (hi - lo) * (i + 0.5) / samples);
            Eigen::VectorXd u(1);
            u[0] = params.back();
            uparams.push_back(u);
        }
        const TypeReport types = type_report(chart, params, max_order, cfg.rank_rtol);
        json orders = json::array();
        for (const auto& o : types.orders)
            orders.push_back(o ? json(*o) : json("exceeds"));

        const SpanSearch span =
            greedy_spanning_points(chart, uparams, false, cfg.rank_rtol);
        json span_j = {{"found", span.found}, {"rank", span.rank}};
        json pts = json::array();
        for (const auto& u : span.points) pts.push_back(u[0]);
        span_j["points"] = pts;

        json plane_j;
        const auto plane = hyperplane_containment(chart, uparams);
        if (plane) {
            plane_j = {{"normal", {plane->normal[0], plane->normal[1]}},
                       {"offset", plane->offset}};
        }
        j["curves"].push_back({{"name", name},
                               {"samples", params},
                               {"max_order", max_order},
                               {"type_orders", orders},
                               {"spanning", span_j},
                               {"hyperplane", plane_j}});
    }

    // Critical-set area refinement for two unit circles.
    const Chart circle = curve_catalog("circle", json::object());
    json areas = json::array();
    for (double eta : {0.5, 0.25, 0.125, 0.0625})
        areas.push_back(
            {{"eta", eta}, {"area", critical_set_area(circle, circle, eta, 512)}});
    j["critical_area"] = {{"pair", "circle/circle"}, {"levels", areas}};

    std::ofstream os = open_out(cfg, "geometry.json");
    os << j.dump(2) << '\n';
    std::cout << "geometry: report written to " << cfg.out << "/geometry.json\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weyl transform toolkit"};
    app.require_subcommand(1);

    std::optional<std::string> config_path, measure, rho_mode, mode, out;
    std::optional<int> n, N, K, curve_panels, curve_order, surface_panels,
        surface_order, quad_order, density_grid, seed_grid, threads;
    std::optional<long> tconv_budget;
    std::optional<double> box, tau_dec, tau_flat, eps_j_rel, rank_rtol,
        density_window;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<int>> n_list;

    app.add_option("--config", config_path, "experiment config JSON");
    app.add_option("--measure", measure, "measure JSON file");
    app.add_option("--n", n, "phase-space dimension n (1 or 2)");
    app.add_option("--N", N, "basis truncation per coordinate");
    app.add_option("--N-list", n_list, "scan sizes (increasing)")->delimiter(',');
    app.add_option("--K", K, "probe singular-value index");
    app.add_option("--curve-panels", curve_panels, "GL panels per curve");
    app.add_option("--curve-order", curve_order, "GL order per panel (curves)");
    app.add_option("--surface-panels", surface_panels, "GL panels per surface axis");
    app.add_option("--surface-order", surface_order, "GL order per panel (surfaces)");
    app.add_option("--rho-mode", rho_mode, "laguerre | quadrature");
    app.add_option("--quad-order", quad_order, "Gauss-Hermite order (0 = auto)");
    app.add_option("--box", box, "admissible |x|, |y| bound");
    app.add_option("--tau-dec", tau_dec, "decay threshold (relative to sigma_1)");
    app.add_option("--tau-flat", tau_flat, "flat threshold (relative to sigma_1)");
    app.add_option("--eps-j-rel", eps_j_rel, "near-critical Jacobian exclusion");
    app.add_option("--rank-rtol", rank_rtol, "relative rank tolerance");
    app.add_option("--mode", mode, "tconv evaluation: direct | product");
    app.add_option("--tconv-budget", tconv_budget, "direct-mode node budget");
    app.add_option("--density-grid", density_grid, "density sweep cells per axis");
    app.add_option("--density-window", density_window, "density sweep half-width");
    app.add_option("--seed-grid", seed_grid, "root seed cells per axis");
    app.add_option("--out", out, "output directory");
    app.add_option("--seed", seed, "seed for randomized checks");
    app.add_option("--threads", threads, "worker threads");

    CLI::App* c_matrix = app.add_subcommand("matrix", "assemble one Weyl matrix");
    CLI::App* c_scan = app.add_subcommand("scan", "singular-value truncation scan");
    CLI::App* c_verify = app.add_subcommand("verify", "run the invariant suites");
    CLI::App* c_density = app.add_subcommand("density", "coarea density sweep");
    CLI::App* c_geometry = app.add_subcommand("geometry", "curve geometry report");
    for (CLI::App* sub : {c_matrix, c_scan, c_verify, c_density, c_geometry})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        ExperimentConfig cfg;
        if (config_path) cfg = config_from_file(*config_path);
        if (measure) cfg.measure = *measure;
        if (n) cfg.n = *n;
        if (N) cfg.N = *N;
        if (n_list) cfg.N_list = *n_list;
        if (K) cfg.K = *K;
        if (curve_panels) cfg.curve_panels = *curve_panels;
        if (curve_order) cfg.curve_order = *curve_order;
        if (surface_panels) cfg.surface_panels = *surface_panels;
        if (surface_order) cfg.surface_order = *surface_order;
        if (rho_mode) cfg.rho_mode = *rho_mode;
        if (quad_order) cfg.quad_order = *quad_order;
        if (box) cfg.box = *box;
        if (tau_dec) cfg.tau_dec = *tau_dec;
        if (tau_flat) cfg.tau_flat = *tau_flat;
        if (eps_j_rel) cfg.eps_j_rel = *eps_j_rel;
        if (rank_rtol) cfg.rank_rtol = *rank_rtol;
        if (mode) cfg.mode = *mode;
        if (tconv_budget) cfg.tconv_budget = *tconv_budget;
        if (density_grid) cfg.density_grid = *density_grid;
        if (density_window) cfg.density_window = *density_window;
        if (seed_grid) cfg.seed_grid = *seed_grid;
        if (out) cfg.out = *out;
        if (seed) cfg.seed = *seed;
        if (threads) cfg.threads = *threads;
        validate(cfg);

        if (c_matrix->parsed()) return cmd_matrix(cfg);
        if (c_scan->parsed()) return cmd_scan(cfg);
        if (c_verify->parsed()) return cmd_verify(cfg);
        if (c_density->parsed()) return cmd_density(cfg);
        if (c_geometry->parsed()) return cmd_geometry(cfg);
        throw ConfigError("no command given");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}
