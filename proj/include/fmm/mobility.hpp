#pragma once

// Movement-pattern sub-model: destination selection (fuzzy or random
// waypoint), Dijkstra path following and pauses at destinations.

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "fmm/environment.hpp"
#include "fmm/rules.hpp"

namespace fmm {

using Rng = std::mt19937_64;

/// Independent deterministic stream for (seed, purpose, index).
Rng make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

enum class Model { Fmm, RwpFree, RwpGraph };

std::string_view to_string(Model m);
std::optional<Model> parse_model(std::string_view name);

struct Range {
    double min = 0.0;
    double max = 0.0;
};

/// Maps simulation seconds onto a 24 h clock.
struct DayClock {
    double seconds_per_hour = 150.0;

    double hours(double sim_seconds) const;
};

struct DestinationConfig {
    std::vector<TimeLabel> labels = default_time_labels();
    DayClock clock;
};

struct FuzzyChoice {
    int site = -1;
    Point inferred;                // defuzzified coordinate (unset on fallback)
    bool crisp_fallback = false;   // every weight underflowed
};

/// One fuzzy rule per (time label, site) cell of the class's rule table,
/// consequent = destination site's center; the system output is snapped to
/// the nearest site. When every weight underflows, falls back to the table
/// entry at the most active time label and the nearest site.
FuzzyChoice select_destination_fuzzy_detail(double sim_time, Point p, int cls, const RuleTable& rules,
                                            const CityMap& map, const DestinationConfig& config);

int select_destination_fuzzy(double sim_time, Point p, int cls, const RuleTable& rules, const CityMap& map,
                             const DestinationConfig& config);

enum class Mode { Moving, Paused };

struct Waypoint {
    Point pos;
    int vertex = -1;  // -1 for free-space targets
};

struct NodeState {
    int id = 0;
    int class_id = 0;
    Mode mode = Mode::Paused;
    Point pos;
    Point leg_start;   // start of the current leg while moving
    double leg_done = 0.0;  // meters covered on the current leg
    double speed = 0.0;
    std::deque<Waypoint> waypoints;
    int vertex = -1;   // graph vertex the node sits on, -1 off-vertex
    int destination_site = -1;
    double pause_remaining = 0.0;
};

/// setdest-style movement record: at `time`, node heads for `destination`
/// at `speed`.
struct TraceEvent {
    double time = 0.0;
    int node = 0;
    Point destination;
    double speed = 0.0;
};

struct MobilityParams {
    Model model = Model::Fmm;
    std::vector<NodeClass> classes = default_node_classes();
    Range pause{10.0, 300.0};
    Range initial_pause{0.0, 60.0};
    Point area{10000.0, 10000.0};
    DestinationConfig destination;
};

struct MobilityContext {
    const CityMap& map;
    const RuleTable& rules;
    const MobilityParams& params;
};

/// Places `n` nodes on uniformly drawn graph vertices, assigns classes by
/// share (largest remainder), starts every node paused for
/// Uniform[initial_pause].
std::vector<NodeState> init_nodes(int n, std::span<const NodeClass> classes, const PathGraph& graph, Rng& rng,
                                  Range initial_pause = {0.0, 60.0});

/// Random-waypoint target: a uniform point of the area (RwpFree) or a
/// uniform graph vertex (RwpGraph).
Waypoint rwp_select_destination(const NodeState& state, Model variant, const CityMap& map, Point area, Rng& rng);

/// Advances one node from time `t` by `dt` seconds. Leg arrivals and pause
/// expiries inside the step carry the residual time forward, so the result
/// does not depend on how a span of time is cut into steps. New legs are
/// appended to `events` when it is non-null.
void step_node(NodeState& state, double t, double dt, const MobilityContext& ctx, Rng& rng,
               std::vector<TraceEvent>* events = nullptr);

struct MobilityTrace {
    std::vector<Point> initial;
    std::vector<int> classes;
    std::vector<double> times;
    std::vector<std::vector<Point>> positions;  // [sample][node]
    std::vector<TraceEvent> events;             // time-ordered
};

/// Runs `nodes` nodes from t = 0 and records positions at every entry of
/// `sample_times` (ascending). Every node draws from its own stream, so
/// trajectories are reproducible from `seed` and independent of `dt`.
MobilityTrace simulate_mobility(const MobilityContext& ctx, int nodes, std::uint64_t seed,
                                std::span<const double> sample_times, double dt = 1.0, bool record_events = false);

}  // namespace fmm
