#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fmm/environment.hpp"
#include "fmm/mobility.hpp"
#include "fmm/netsim.hpp"
#include "fmm/rules.hpp"

namespace fmm {

enum class TableSource { Bundled, Derived };

struct SessionSpec {
    int count = 20;
    int packet_bytes = 512;
    double rate = 4.0;
    int max_packets = 6000;
};

/// Experiment configuration. Defaults reproduce the reference setup:
/// 10 km x 10 km, 250 m range, 0-10 m/s, 10-300 s pauses, 60 s warm-up,
/// 3600 s of movement, 20 CBR sessions of 512 B at 4 pkt/s (cap 6000).
struct SimConfig {
    double area_width = 10000.0;
    double area_height = 10000.0;
    std::vector<Model> models{Model::Fmm, Model::RwpFree};
    int nodes = 50;
    std::vector<NodeClass> classes = default_node_classes();
    Range pause{10.0, 300.0};
    double duration = 3600.0;
    double warmup = 60.0;
    double dt = 1.0;
    double snapshot_interval = 1.0;
    double range = 250.0;
    SessionSpec sessions;
    LinkParams link;
    std::vector<std::uint64_t> seeds{1};
    std::optional<std::string> map_path;         // bundled paper_city when unset
    std::optional<std::string> rules_path;       // bundled tables when unset
    std::optional<std::string> priorities_path;  // bundled priorities when unset
    TableSource table_source = TableSource::Bundled;
    double p1 = 0.6;
    double p2 = 0.4;
    std::vector<TimeLabel> time_labels = default_time_labels();
    double seconds_per_hour = 150.0;
    bool write_traces = true;
};

/// Parses a JSON config. Relative file paths resolve against `base_dir`.
/// Unknown keys, type errors, range violations and missing files raise
/// ConfigError keyed by the JSON path (e.g. "sessions.rate").
SimConfig parse_config(const std::string& json_text, const std::string& base_dir = ".");

/// Reads and parses a config file; an empty file yields the defaults.
SimConfig load_config(const std::string& path);

/// Cross-field checks shared by parse_config and programmatic configs.
void validate(const SimConfig& config);

/// Everything a run needs, resolved from a config: the city, the rule
/// tables in use and the mobility parameters.
struct Scenario {
    SimConfig config;
    CityMap map;
    RuleTable rules;
    MobilityParams mobility;

    MobilityContext context() const { return {map, rules, mobility}; }
};

/// Loads the map and tables named by `config` (or the bundled ones). The
/// returned scenario's mobility model is `config.models.front()`.
Scenario build_scenario(const SimConfig& config);

std::vector<PriorityTable> load_priorities_for(const SimConfig& config, const CityMap& map);

}  // namespace fmm
