#include "padic_lab/commands.hpp"
#include "padic_lab/report.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

const char* describe_command(const std::string& name) {
    if (name == "grid-info") return "Grid size, lowest eigenvalue, shell census and dual-norm histogram";
    if (name == "symbol-verify") return "Recompute the symbol on every class and arbitrate the closed forms";
    if (name == "norms") return "All norm families of the configured function and the equivalence constants";
    if (name == "solve") return "Implicit Euler trajectory from the configured initial condition";
    if (name == "contraction") return "H_-1 contraction on random pairs of initial data";
    if (name == "convergence") return "Time-step refinement against the exact linear solution and weak residuals";
    return "Run the verification suites on the configured grid";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Experiments with the Vladimirov operator and porous medium flows on p-adic balls", "padiclab"};
    app.set_version_flag("--version", std::string(padic::lab::kToolVersion));
    app.require_subcommand(1);

    padic::lab::CommandOptions options;
    std::string config;
    std::string out = options.out.string();
    std::uint64_t seed = 0;
    std::string fault;
    for (const auto& name : padic::lab::command_names()) {
        auto* sub = app.add_subcommand(name, describe_command(name));
        sub->add_option("--config", config, "TOML configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", out, "Output directory for report.json and CSV tables")->capture_default_str();
        sub->add_option("--seed", seed, "Override the configured random seed");
        sub->add_flag("--quiet", options.quiet, "Only print errors");
        sub->add_option("--inject-fault", fault, "Corrupt the symbol table or Haar weight by the configured fault scale")
            ->check(CLI::IsMember({"symbol", "haar"}))
            ->group("");
        sub->callback([&options, name] { options.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : padic::lab::kExitConfigError;
    }

    if (!config.empty()) options.config = config;
    options.out = out;
    for (const auto* sub : app.get_subcommands()) {
        if (sub->count("--seed") > 0) options.seed = seed;
    }
    if (!fault.empty()) {
        // The hook reuses [verify] fault_scale so that the corruption matches the negative controls.
        double scale = padic::lab::VerifySpec{}.fault_scale;
        if (options.config) {
            try {
                scale = padic::lab::load_config(*options.config).verify.fault_scale;
            } catch (const std::exception&) {
                // Reported with the proper exit code by run_command.
            }
        }
        (fault == "symbol" ? options.fault.symbol_scale : options.fault.haar_scale) = scale;
    }
    return padic::lab::run_command(options, std::cout, std::cerr);
}
