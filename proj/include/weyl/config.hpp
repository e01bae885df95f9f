#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "weyl/twisted.hpp"
#include "weyl/weyl_transform.hpp"

namespace weyl {

inline const std::string kVersion = "0.1.0";

// One experiment = one JSON config, every key overridable by the CLI flag
// of the same name. Defaults here are the documented defaults everywhere.
struct ExperimentConfig {
    std::string measure;      // path of the measure JSON file
    int n = 1;
    int N = 16;
    std::vector<int> N_list = {32, 64, 128, 256};
    int K = 8;

    int curve_panels = 64;
    int curve_order = 8;
    int surface_panels = 2;
    int surface_order = 4;

    std::string rho_mode = "laguerre"; // laguerre | quadrature
    int quad_order = 0;                // 0 = automatic
    double box = 16.0;

    double tau_dec = 1e-3;
    double tau_flat = 1e-1;
    double eps_j_rel = 1e-6;
    double rank_rtol = 1e-8;

    std::string mode = "product"; // tconv evaluation: direct | product
    long tconv_budget = 1L << 27;

    int density_grid = 64;        // sweep cells per axis
    double density_window = 2.5;  // sweep over [-window, window]^2
    int seed_grid = 256;          // root-finder seed cells per axis

    std::string out = ".";
    std::uint64_t seed = 12345;
    int threads = 1;
};

// Strict parse: unknown keys are rejected, invariants checked (n in {1,2},
// N_list strictly increasing, thresholds positive).
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig config_from_file(const std::string& path);
void validate(const ExperimentConfig& cfg);

nlohmann::json config_to_json(const ExperimentConfig& cfg);

// FNV-1a over the canonical (key-sorted) dump; stamped into output headers
// so reported numbers can be traced to their exact configuration.
std::uint64_t config_hash(const ExperimentConfig& cfg);

WeylOptions weyl_options(const ExperimentConfig& cfg);
ScanThresholds scan_thresholds(const ExperimentConfig& cfg);
DensityOptions density_options(const ExperimentConfig& cfg);
RhoOptions rho_options(const ExperimentConfig& cfg);
StreamOptions stream_options(const ExperimentConfig& cfg);

} // namespace weyl
