#pragma once

#include "padic/monotone.hpp"
#include "padic/vladimirov.hpp"
#include "padic_lab/config.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace padic::lab {

/// Deliberate corruption used by the negative controls. symbol_scale multiplies every
/// nonzero-class entry of the multiplier tables (Vladimirov symbol and AGS multiplier);
/// haar_scale multiplies the Haar weight of a cell.
struct Fault {
    double symbol_scale = 1.0;
    double haar_scale = 1.0;

    bool active() const noexcept { return symbol_scale != 1.0 || haar_scale != 1.0; }
    std::string describe() const;
};

/// One measured quantity against its limit. relation is one of "<=", "<", ">=", "==", "in".
struct Check {
    std::string name;
    double value = 0.0;
    std::string relation = "<=";
    double limit = 0.0;
    double upper = 0.0;  ///< only for "in": value must lie in [limit, upper]
    bool passed = false;
};

Check make_check(std::string name, double value, std::string relation, double limit, double upper = 0.0);

struct SuiteResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::vector<Check> checks;
    nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

/// Everything a suite needs: one grid, the operator order, the nonlinearity exponent,
/// the battery parameters, the seed and an optional fault.
struct SuiteContext {
    GridSpec grid;
    double alpha = 0.5;
    double m = 2.0;
    VerifySpec verify;
    ProxOptions prox;
    std::uint64_t seed = 1;
    Fault fault;

    static SuiteContext from_config(const ExperimentConfig& cfg);
};

/// Short identifier of a suite (1-based): fourier, diagonalization, ...
std::string suite_name(int id);

/// Runs one suite. Solver failures are reported as failed checks, never thrown.
SuiteResult run_suite(int id, const SuiteContext& ctx);

/// Grid with the fault's Haar weight applied.
BallGrid faulted_grid(const SuiteContext& ctx);
/// Operator whose symbol table carries the fault.
VladimirovOperator faulted_operator(const BallGrid& grid, double alpha, const Fault& fault);
/// AGS multiplier table carrying the fault.
std::vector<double> faulted_ags_table(const BallGrid& grid, double s, const Fault& fault);

nlohmann::ordered_json to_json(const Check& c);
nlohmann::ordered_json to_json(const SuiteResult& r, const SuiteContext& ctx);

}  // namespace padic::lab
