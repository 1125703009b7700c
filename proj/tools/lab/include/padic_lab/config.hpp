#pragma once

#include "padic/ball_grid.hpp"
#include "padic/evolve.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace padic::lab {

struct GridSpec {
    int p = 2;
    int N = 1;
    int K = 3;
    std::int64_t cell_cap = kDefaultCellCap;
};

/// Initial condition / test function. generator is one of
/// psi0, random, indicator, character:<b>, file.
struct InitialSpec {
    std::string generator = "random";
    double amplitude = 1.0;
    int radius = 0;    ///< indicator: the ball |x|_p <= p^radius
    std::string path;  ///< file: CSV with one value per cell
};

/// Parameters of the verification battery. Defaults are the acceptance settings.
struct VerifySpec {
    int samples = 100;
    int pairs = 20;
    std::vector<double> sobolev_orders{0.3, 0.5, 0.9};
    std::vector<double> prox_powers{0.5, 1.0, 2.0, 3.0};
    std::vector<double> prox_steps{0.01, 0.1, 1.0};
    std::vector<double> contraction_powers{0.5, 2.0};
    double contraction_tau = 0.05;
    double contraction_horizon = 0.5;
    std::vector<double> refinement_steps{0.1, 0.05, 0.025, 0.0125};
    double refinement_horizon = 1.0;
    double fault_scale = 1.01;
    /// Suites run by `verify`, numbered 1 to kSuiteCount.
    std::vector<int> suites{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
};

inline constexpr int kSuiteCount = 11;

struct ExperimentConfig {
    std::uint64_t seed = 1;
    GridSpec grid;
    double alpha = 0.5;
    double m = 2.0;
    SolverConfig solver;
    InitialSpec initial;
    VerifySpec verify;
    /// Directory that relative paths in the file are resolved against.
    std::filesystem::path base_dir = ".";
};

/// p=2, N=1, K=3, alpha=0.5, m=2.
ExperimentConfig default_config();

/// Parses and validates a TOML file. Throws ConfigurationError whose message starts
/// with "<path>:<line>:<column>:" pointing at the offending value.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text, const std::string& source_name = "<config>");

nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

}  // namespace padic::lab
