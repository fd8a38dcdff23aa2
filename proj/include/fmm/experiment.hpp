#pragma once

// Runs (model, seed) cells of a configured experiment and writes the
// per-run CSV, per-metric plot data and optional movement traces.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fmm/config.hpp"
#include "fmm/mobility.hpp"
#include "fmm/netsim.hpp"

namespace fmm {

/// warmup, warmup + interval, ... up to duration inclusive.
std::vector<double> snapshot_times(const SimConfig& config);

/// `count` sessions with distinct random endpoints, all starting at warm-up.
std::vector<CbrSession> make_sessions(const SimConfig& config, std::uint64_t seed);

struct CellResult {
    Model model = Model::Fmm;
    std::uint64_t seed = 0;
    MetricsReport report;
    MobilityTrace trace;  // events recorded only when traces are requested
};

/// Mobility for one cell, sampled at snapshot_times().
MobilityTrace run_mobility(const Scenario& scenario, Model model, std::uint64_t seed, bool record_events);

CellResult run_cell(const Scenario& scenario, Model model, std::uint64_t seed, bool keep_trace = false);

/// Every (model, seed) cell in config order. Errors are rethrown with the
/// cell named in the message.
std::vector<CellResult> run_cells(const Scenario& scenario, bool keep_traces = false);

void write_results_csv(std::ostream& out, const std::vector<CellResult>& cells);
void write_plot_data(std::ostream& out, std::size_t metric, const SimConfig& config,
                     const std::vector<CellResult>& cells);

/// Runs every cell, then writes results.csv, plot_<metric>.dat and (when
/// enabled) trace_<model>_seed<seed>.tcl into `out_dir`. Nothing is written
/// unless every cell succeeds.
std::vector<CellResult> run_experiment(const SimConfig& config, const std::string& out_dir);

/// Mobility only: writes one trace file per (model, seed) and returns the paths.
std::vector<std::string> run_trace_only(const SimConfig& config, const std::string& out_dir);

std::string trace_file_name(Model model, std::uint64_t seed);

}  // namespace fmm
