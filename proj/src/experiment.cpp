#include "fmm/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "fmm/error.hpp"
#include "fmm/trace.hpp"

namespace fmm {

namespace fs = std::filesystem;

std::vector<double> snapshot_times(const SimConfig& config)
{
    std::vector<double> times;
    const double span = config.duration - config.warmup;
    const auto steps = static_cast<long>(std::floor(span / config.snapshot_interval + 1e-9));
    for (long k = 0; k <= steps; ++k)
        times.push_back(config.warmup + static_cast<double>(k) * config.snapshot_interval);
    return times;
}

std::vector<CbrSession> make_sessions(const SimConfig& config, std::uint64_t seed)
{
    std::vector<CbrSession> sessions;
    if (config.sessions.count == 0)
        return sessions;
    if (config.nodes < 2)
        throw ConfigError("sessions.count", "sessions need at least two nodes");
    Rng rng = make_rng(seed, 1);
    std::uniform_int_distribution<int> pick(0, config.nodes - 1);
    for (int i = 0; i < config.sessions.count; ++i) {
        CbrSession s;
        s.source = pick(rng);
        do
            s.destination = pick(rng);
        while (s.destination == s.source);
        s.start = config.warmup;
        s.packet_bytes = config.sessions.packet_bytes;
        s.rate = config.sessions.rate;
        s.max_packets = config.sessions.max_packets;
        sessions.push_back(s);
    }
    return sessions;
}

MobilityTrace run_mobility(const Scenario& scenario, Model model, std::uint64_t seed, bool record_events)
{
    MobilityParams params = scenario.mobility;
    params.model = model;
    const MobilityContext ctx{scenario.map, scenario.rules, params};
    const auto times = snapshot_times(scenario.config);
    return simulate_mobility(ctx, scenario.config.nodes, seed, times, scenario.config.dt, record_events);
}

CellResult run_cell(const Scenario& scenario, Model model, std::uint64_t seed, bool keep_trace)
{
    const auto& config = scenario.config;
    CellResult cell;
    cell.model = model;
    cell.seed = seed;
    MobilityTrace trace = run_mobility(scenario, model, seed, keep_trace);

    std::vector<ConnectivitySnapshot> snapshots;
    snapshots.reserve(trace.times.size());
    for (std::size_t k = 0; k < trace.times.size(); ++k)
        snapshots.push_back(snapshot_connectivity(trace.positions[k], config.range, trace.times[k]));
    const auto sessions = make_sessions(config, seed);
    cell.report = run_traffic(snapshots, sessions, config.duration, config.link);
    if (keep_trace)
        cell.trace = std::move(trace);
    return cell;
}

std::vector<CellResult> run_cells(const Scenario& scenario, bool keep_traces)
{
    std::vector<CellResult> cells;
    for (const Model model : scenario.config.models)
        for (const auto seed : scenario.config.seeds) {
            try {
                cells.push_back(run_cell(scenario, model, seed, keep_traces));
            } catch (const std::exception& e) {
                throw Error(fmt::format("model {} seed {}: {}", to_string(model), seed, e.what()));
            }
        }
    return cells;
}

void write_results_csv(std::ostream& out, const std::vector<CellResult>& cells)
{
    out << "model,seed,metric,value\n";
    for (const auto& c : cells)
        for (std::size_t m = 0; m < std::size(kMetricNames); ++m) {
            const auto v = metric_value(c.report, m);
            if (v)
                fmt::print(out, "{},{},{},{:.10g}\n", to_string(c.model), c.seed, kMetricNames[m], *v);
            else
                fmt::print(out, "{},{},{},NA\n", to_string(c.model), c.seed, kMetricNames[m]);
        }
}

void write_plot_data(std::ostream& out, std::size_t metric, const SimConfig& config,
                     const std::vector<CellResult>& cells)
{
    fmt::print(out, "# {}\n# model mean sd runs\n", kMetricNames[metric]);
    for (const Model model : config.models) {
        std::vector<MetricsReport> reports;
        for (const auto& c : cells)
            if (c.model == model)
                reports.push_back(c.report);
        const auto s = aggregate_runs(reports).metrics[metric];
        if (s.count == 0)
            fmt::print(out, "{} NA NA 0\n", to_string(model));
        else
            fmt::print(out, "{} {:.10g} {:.10g} {}\n", to_string(model), s.mean, s.sd, s.count);
    }
}

std::string trace_file_name(Model model, std::uint64_t seed)
{
    return fmt::format("trace_{}_seed{}.tcl", to_string(model), seed);
}

namespace {

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << content;
    out.flush();
    if (!out)
        throw IoError("error while writing " + path.string());
}

void ensure_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory " + dir);
}

}  // namespace

std::vector<CellResult> run_experiment(const SimConfig& config, const std::string& out_dir)
{
    const Scenario scenario = build_scenario(config);
    auto cells = run_cells(scenario, config.write_traces);

    std::ostringstream csv;
    write_results_csv(csv, cells);
    std::vector<std::string> plots;
    for (std::size_t m = 0; m < std::size(kMetricNames); ++m) {
        std::ostringstream p;
        write_plot_data(p, m, config, cells);
        plots.push_back(p.str());
    }

    ensure_dir(out_dir);
    const fs::path dir(out_dir);
    if (config.write_traces)
        for (const auto& c : cells)
            write_trace((dir / trace_file_name(c.model, c.seed)).string(), c.trace.initial, c.trace.events);
    for (std::size_t m = 0; m < plots.size(); ++m)
        write_file(dir / fmt::format("plot_{}.dat", kMetricNames[m]), plots[m]);
    write_file(dir / "results.csv", csv.str());
    return cells;
}

std::vector<std::string> run_trace_only(const SimConfig& config, const std::string& out_dir)
{
    const Scenario scenario = build_scenario(config);
    std::vector<std::pair<std::string, MobilityTrace>> traces;
    for (const Model model : config.models)
        for (const auto seed : config.seeds) {
            try {
                traces.emplace_back(trace_file_name(model, seed), run_mobility(scenario, model, seed, true));
            } catch (const std::exception& e) {
                throw Error(fmt::format("model {} seed {}: {}", to_string(model), seed, e.what()));
            }
        }
    ensure_dir(out_dir);
    std::vector<std::string> paths;
    for (const auto& [name, trace] : traces) {
        const auto path = (fs::path(out_dir) / name).string();
        write_trace(path, trace.initial, trace.events);
        paths.push_back(path);
    }
    return paths;
}

}  // namespace fmm
