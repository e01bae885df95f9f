#include "weyl/config.hpp"

#include <fstream>

namespace weyl {

using nlohmann::json;

namespace {

const char* kKeys[] = {
    "measure",       "n",          "N",           "N_list",        "K",
    "curve_panels",  "curve_order", "surface_panels", "surface_order",
    "rho_mode",      "quad_order", "box",         "tau_dec",       "tau_flat",
    "eps_j_rel",     "rank_rtol",  "mode",        "tconv_budget",
    "density_grid",  "density_window", "seed_grid",
    "out",           "seed",       "threads"};

template <typename T>
void take(const json& j, const char* key, T& field) {
    if (j.contains(key)) field = j.at(key).get<T>();
}

} // namespace

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object())
        throw ConfigError("config: top level must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : kKeys)
            if (it.key() == k) { known = true; break; }
        if (!known)
            throw ConfigError("config: unknown key \"" + it.key() + "\"");
    }
    ExperimentConfig cfg;
    take(j, "measure", cfg.measure);
    take(j, "n", cfg.n);
    take(j, "N", cfg.N);
    take(j, "N_list", cfg.N_list);
    take(j, "K", cfg.K);
    take(j, "curve_panels", cfg.curve_panels);
    take(j, "curve_order", cfg.curve_order);
    take(j, "surface_panels", cfg.surface_panels);
    take(j, "surface_order", cfg.surface_order);
    take(j, "rho_mode", cfg.rho_mode);
    take(j, "quad_order", cfg.quad_order);
    take(j, "box", cfg.box);
    take(j, "tau_dec", cfg.tau_dec);
    take(j, "tau_flat", cfg.tau_flat);
    take(j, "eps_j_rel", cfg.eps_j_rel);
    take(j, "rank_rtol", cfg.rank_rtol);
    take(j, "mode", cfg.mode);
    take(j, "tconv_budget", cfg.tconv_budget);
    take(j, "density_grid", cfg.density_grid);
    take(j, "density_window", cfg.density_window);
    take(j, "seed_grid", cfg.seed_grid);
    take(j, "out", cfg.out);
    take(j, "seed", cfg.seed);
    take(j, "threads", cfg.threads);
    validate(cfg);
    return cfg;
}

ExperimentConfig config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open \"" + path + "\"");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config: JSON parse error in \"" + path + "\": " + e.what());
    }
    return config_from_json(j);
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.n != 1 && cfg.n != 2)
        throw ConfigError("config: n must be 1 or 2");
    if (cfg.N < 1) throw ConfigError("config: N must be positive");
    if (cfg.N_list.empty())
        throw ConfigError("config: N_list must be non-empty");
    for (size_t i = 0; i < cfg.N_list.size(); ++i) {
        if (cfg.N_list[i] < 1)
            throw ConfigError("config: N_list entries must be positive");
        if (i > 0 && cfg.N_list[i] <= cfg.N_list[i - 1])
            throw ConfigError("config: N_list must be strictly increasing");
    }
    if (cfg.K < 1 || cfg.K >= cfg.N_list.front())
        throw ConfigError("config: K must satisfy 1 <= K < min(N_list)");
    if (cfg.curve_panels < 1 || cfg.curve_order < 1 || cfg.surface_panels < 1 ||
        cfg.surface_order < 1)
        throw ConfigError("config: quadrature panels and orders must be positive");
    if (cfg.rho_mode != "laguerre" && cfg.rho_mode != "quadrature")
        throw ConfigError("config: rho_mode must be laguerre or quadrature");
    if (cfg.quad_order < 0)
        throw ConfigError("config: quad_order must be >= 0 (0 = automatic)");
    if (cfg.box <= 0.0 || cfg.tau_dec <= 0.0 || cfg.tau_flat <= 0.0 ||
        cfg.eps_j_rel <= 0.0 || cfg.rank_rtol <= 0.0)
        throw ConfigError("config: thresholds must be positive");
    if (cfg.mode != "direct" && cfg.mode != "product")
        throw ConfigError("config: mode must be direct or product");
    if (cfg.tconv_budget < 1)
        throw ConfigError("config: tconv_budget must be positive");
    if (cfg.density_grid < 2 || cfg.seed_grid < 2)
        throw ConfigError("config: grids must have at least 2 cells");
    if (cfg.density_window <= 0.0)
        throw ConfigError("config: density_window must be positive");
    if (cfg.threads < 1)
        throw ConfigError("config: threads must be >= 1");
}

// Canonical form for hashing. "threads" and "out" are execution schedule
// and plumbing, not experiment identity: every result is bitwise
// thread-count-independent, and reports produced with different thread
// counts or output directories must compare byte-identical.
json config_to_json(const ExperimentConfig& cfg) {
    return json{{"measure", cfg.measure},
                {"n", cfg.n},
                {"N", cfg.N},
                {"N_list", cfg.N_list},
                {"K", cfg.K},
                {"curve_panels", cfg.curve_panels},
                {"curve_order", cfg.curve_order},
                {"surface_panels", cfg.surface_panels},
                {"surface_order", cfg.surface_order},
                {"rho_mode", cfg.rho_mode},
                {"quad_order", cfg.quad_order},
                {"box", cfg.box},
                {"tau_dec", cfg.tau_dec},
                {"tau_flat", cfg.tau_flat},
                {"eps_j_rel", cfg.eps_j_rel},
                {"rank_rtol", cfg.rank_rtol},
                {"mode", cfg.mode},
                {"tconv_budget", cfg.tconv_budget},
                {"density_grid", cfg.density_grid},
                {"density_window", cfg.density_window},
                {"seed_grid", cfg.seed_grid},
                {"seed", cfg.seed}};
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    const std::string dump = config_to_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

RhoOptions rho_options(const ExperimentConfig& cfg) {
    RhoOptions r;
    r.mode = (cfg.rho_mode == "laguerre") ? RhoMode::laguerre : RhoMode::quadrature;
    r.quad_order = cfg.quad_order;
    r.box = cfg.box;
    return r;
}

StreamOptions stream_options(const ExperimentConfig& cfg) {
    StreamOptions s;
    s.curve_quad = {cfg.curve_panels, cfg.curve_order};
    s.surface_quad = {cfg.surface_panels, cfg.surface_order};
    s.tconv_budget = cfg.tconv_budget;
    return s;
}

WeylOptions weyl_options(const ExperimentConfig& cfg) {
    WeylOptions w;
    w.rho = rho_options(cfg);
    w.stream = stream_options(cfg);
    w.tconv_mode = (cfg.mode == "direct") ? TConvMode::direct : TConvMode::product;
    w.threads = cfg.threads;
    return w;
}

ScanThresholds scan_thresholds(const ExperimentConfig& cfg) {
    return {cfg.tau_dec, cfg.tau_flat};
}

DensityOptions density_options(const ExperimentConfig& cfg) {
    DensityOptions d;
    d.seed_grid = cfg.seed_grid;
    d.eps_j_rel = cfg.eps_j_rel;
    return d;
}

} // namespace weyl
