// fmmsim: command-line front end for the fuzzy mobility simulator.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fmm/config.hpp"
#include "fmm/error.hpp"
#include "fmm/experiment.hpp"

namespace {

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string model;
    std::string out_dir = "out";
};

void add_common(CLI::App* cmd, Common& c, bool with_out_dir)
{
    cmd->add_option("--config", c.config_path, "JSON config file (defaults when omitted)");
    cmd->add_option("--seed", c.seed, "Run this single seed instead of the configured ones");
    cmd->add_option("--model", c.model, "Run this single model: fmm, rwp_free or rwp_graph");
    if (with_out_dir)
        cmd->add_option("--out-dir", c.out_dir, "Output directory")->capture_default_str();
}

fmm::SimConfig resolve(const Common& c)
{
    fmm::SimConfig config = c.config_path.empty() ? fmm::SimConfig{} : fmm::load_config(c.config_path);
    if (c.seed)
        config.seeds = {*c.seed};
    if (!c.model.empty()) {
        const auto m = fmm::parse_model(c.model);
        if (!m)
            throw fmm::ConfigError("--model", "unknown model '" + c.model + "'");
        config.models = {*m};
    }
    fmm::validate(config);
    return config;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fuzzy mobility model simulator"};
    app.require_subcommand(1);

    Common run_opts, trace_opts, validate_opts, derive_opts;
    std::string priorities_path;
    auto* run = app.add_subcommand("run", "Run the experiment and write metrics, plot data and traces");
    add_common(run, run_opts, true);
    auto* trace = app.add_subcommand("trace", "Generate mobility traces only");
    add_common(trace, trace_opts, true);
    auto* check = app.add_subcommand("validate", "Check the config, map and rule tables");
    add_common(check, validate_opts, false);
    auto* derive = app.add_subcommand("derive-rules", "Derive rule tables from a priority file and print them");
    derive->add_option("--config", derive_opts.config_path, "JSON config file");
    derive->add_option("--priorities", priorities_path, "Priority file (bundled priorities when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const auto config = resolve(run_opts);
            const auto cells = fmm::run_experiment(config, run_opts.out_dir);
            fmt::print("{} runs written to {}\n", cells.size(), run_opts.out_dir);
        } else if (*trace) {
            const auto config = resolve(trace_opts);
            for (const auto& path : fmm::run_trace_only(config, trace_opts.out_dir))
                fmt::print("{}\n", path);
        } else if (*check) {
            const auto config = resolve(validate_opts);
            const auto scenario = fmm::build_scenario(config);
            fmt::print("ok: {} vertices, {} sites, max site distance {:.3f} m\n",
                       scenario.map.graph().vertex_count(), scenario.map.sites().size(),
                       scenario.map.distances().max_dis());
        } else if (*derive) {
            fmm::SimConfig config = resolve(derive_opts);
            if (!priorities_path.empty())
                config.priorities_path = priorities_path;
            config.table_source = fmm::TableSource::Derived;
            const auto scenario = fmm::build_scenario(config);
            fmm::write_rule_table(std::cout, scenario.rules, config.classes, scenario.map.sites(),
                                  config.time_labels);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
