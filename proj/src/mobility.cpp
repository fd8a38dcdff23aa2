#include "fmm/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fmm/error.hpp"
#include "fmm/fuzzy.hpp"

namespace fmm {

Rng make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

std::string_view to_string(Model m)
{
    switch (m) {
    case Model::Fmm:
        return "fmm";
    case Model::RwpFree:
        return "rwp_free";
    case Model::RwpGraph:
        return "rwp_graph";
    }
    return "?";
}

std::optional<Model> parse_model(std::string_view name)
{
    for (Model m : {Model::Fmm, Model::RwpFree, Model::RwpGraph})
        if (to_string(m) == name)
            return m;
    return std::nullopt;
}

double DayClock::hours(double sim_seconds) const
{
    const double h = std::fmod(sim_seconds / seconds_per_hour, 24.0);
    return h < 0.0 ? h + 24.0 : h;
}

FuzzyChoice select_destination_fuzzy_detail(double sim_time, Point p, int cls, const RuleTable& rules,
                                            const CityMap& map, const DestinationConfig& config)
{
    const auto sites = map.sites();
    const auto centers = map.site_centers();
    std::vector<double> label_centers;
    for (const auto& l : config.labels)
        label_centers.push_back(l.center);

    std::vector<fuzzy::FuzzyRule> fuzzy_rules;
    fuzzy_rules.reserve(label_centers.size() * sites.size());
    for (int l = 0; l < static_cast<int>(label_centers.size()); ++l)
        for (const auto& s : sites) {
            const int dest = rules.destination(cls, s.id, l);
            fuzzy_rules.push_back({l, s.id, centers[static_cast<std::size_t>(dest)]});
        }

    const double hours = config.clock.hours(sim_time);
    try {
        const Point out = fuzzy::fuzzy_system_eval(hours, p, fuzzy_rules, label_centers, centers);
        return {nearest_site(out, sites).id, out, false};
    } catch (const NoActivationError&) {
        int best_label = 0;
        double best_mu = -1.0;
        for (int l = 0; l < static_cast<int>(label_centers.size()); ++l) {
            const double mu = fuzzy::time_membership(hours, label_centers[static_cast<std::size_t>(l)]);
            if (mu > best_mu) {
                best_mu = mu;
                best_label = l;
            }
        }
        const int here = nearest_site(p, sites).id;
        return {lookup_destination(rules, cls, here, best_label), {}, true};
    }
}

int select_destination_fuzzy(double sim_time, Point p, int cls, const RuleTable& rules, const CityMap& map,
                             const DestinationConfig& config)
{
    return select_destination_fuzzy_detail(sim_time, p, cls, rules, map, config).site;
}

std::vector<NodeState> init_nodes(int n, std::span<const NodeClass> classes, const PathGraph& graph, Rng& rng,
                                  Range initial_pause)
{
    if (n < 1)
        throw ConfigError("nodes", "need at least one node");
    if (classes.empty())
        throw ConfigError("classes", "need at least one node class");
    if (graph.vertex_count() == 0)
        throw ConfigError("map", "graph has no vertices");
    const double total = std::accumulate(classes.begin(), classes.end(), 0.0,
                                         [](double acc, const NodeClass& c) { return acc + c.share; });
    if (std::abs(total - 1.0) > 1e-9)
        throw ConfigError("classes", "class shares must sum to 1");

    // Largest-remainder apportionment, ties to the lower class id.
    std::vector<int> counts(classes.size());
    std::vector<std::pair<double, int>> remainders;
    int assigned = 0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const double exact = classes[c].share * n;
        counts[c] = static_cast<int>(std::floor(exact + 1e-9));
        assigned += counts[c];
        remainders.push_back({exact - counts[c], static_cast<int>(c)});
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first + 1e-12; });
    for (int i = 0; assigned < n; ++i, ++assigned)
        ++counts[static_cast<std::size_t>(remainders[static_cast<std::size_t>(i) % remainders.size()].second)];

    std::uniform_int_distribution<int> pick_vertex(0, static_cast<int>(graph.vertex_count()) - 1);
    std::uniform_real_distribution<double> pick_pause(initial_pause.min, initial_pause.max);
    std::vector<NodeState> nodes;
    nodes.reserve(static_cast<std::size_t>(n));
    int id = 0;
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (int k = 0; k < counts[c]; ++k) {
            NodeState s;
            s.id = id++;
            s.class_id = static_cast<int>(c);
            s.vertex = pick_vertex(rng);
            s.pos = graph.position(s.vertex);
            s.leg_start = s.pos;
            s.mode = Mode::Paused;
            s.pause_remaining = pick_pause(rng);
            nodes.push_back(std::move(s));
        }
    return nodes;
}

Waypoint rwp_select_destination(const NodeState& /*state*/, Model variant, const CityMap& map, Point area, Rng& rng)
{
    if (variant == Model::RwpGraph) {
        std::uniform_int_distribution<int> pick(0, static_cast<int>(map.graph().vertex_count()) - 1);
        const int v = pick(rng);
        return {map.graph().position(v), v};
    }
    std::uniform_real_distribution<double> ux(0.0, area.x);
    std::uniform_real_distribution<double> uy(0.0, area.y);
    const double x = ux(rng);
    const double y = uy(rng);
    return {{x, y}, -1};
}

namespace {

double draw_speed(const SpeedRange& range, Rng& rng)
{
    if (range.max <= range.min)
        return range.max;
    std::uniform_real_distribution<double> u(range.min, range.max);
    double v = 0.0;
    do
        v = u(rng);
    while (v <= 0.0);
    return v;
}

void pause(NodeState& s, const MobilityParams& params, Rng& rng)
{
    std::uniform_real_distribution<double> u(params.pause.min, params.pause.max);
    s.mode = Mode::Paused;
    s.pause_remaining = params.pause.max <= params.pause.min ? params.pause.min : u(rng);
}

void start_leg(NodeState& s, double t, std::vector<TraceEvent>* events)
{
    s.leg_start = s.pos;
    s.leg_done = 0.0;
    if (events)
        events->push_back({t, s.id, s.waypoints.front().pos, s.speed});
}

void follow_path(NodeState& s, const PathGraph& graph, int dst)
{
    const Path path = shortest_path(graph, s.vertex, dst);
    for (std::size_t i = 1; i < path.vertices.size(); ++i)
        s.waypoints.push_back({graph.position(path.vertices[i]), path.vertices[i]});
}

void begin_trip(NodeState& s, double t, const MobilityContext& ctx, Rng& rng, std::vector<TraceEvent>* events)
{
    const auto& params = ctx.params;
    const auto& graph = ctx.map.graph();
    s.waypoints.clear();
    switch (params.model) {
    case Model::Fmm: {
        const int site = select_destination_fuzzy(t, s.pos, s.class_id, ctx.rules, ctx.map, params.destination);
        s.destination_site = site;
        const int anchor = ctx.map.site(site).anchor_vertex;
        if (anchor == s.vertex) {
            pause(s, params, rng);
            return;
        }
        follow_path(s, graph, anchor);
        break;
    }
    case Model::RwpGraph: {
        const Waypoint w = rwp_select_destination(s, Model::RwpGraph, ctx.map, params.area, rng);
        if (w.vertex == s.vertex) {
            pause(s, params, rng);
            return;
        }
        follow_path(s, graph, w.vertex);
        break;
    }
    case Model::RwpFree: {
        const Waypoint w = rwp_select_destination(s, Model::RwpFree, ctx.map, params.area, rng);
        if (w.pos == s.pos) {
            pause(s, params, rng);
            return;
        }
        s.waypoints.push_back(w);
        break;
    }
    }
    s.speed = draw_speed(params.classes.at(static_cast<std::size_t>(s.class_id)).speed, rng);
    s.mode = Mode::Moving;
    start_leg(s, t, events);
}

}  // namespace

void step_node(NodeState& s, double t, double dt, const MobilityContext& ctx, Rng& rng,
               std::vector<TraceEvent>* events)
{
    double left = dt;
    while (left > 0.0) {
        if (s.mode == Mode::Paused) {
            if (s.pause_remaining > left) {
                s.pause_remaining -= left;
                return;
            }
            left -= s.pause_remaining;
            s.pause_remaining = 0.0;
            begin_trip(s, t + (dt - left), ctx, rng, events);
            continue;
        }

        const Waypoint target = s.waypoints.front();
        const double leg = euclidean_distance(s.leg_start, target.pos);
        const double remaining = leg - s.leg_done;
        const double reach = s.speed * left;
        if (reach < remaining) {
            s.leg_done += reach;
            s.pos = lerp(s.leg_start, target.pos, s.leg_done / leg);
            s.vertex = -1;
            return;
        }
        // Arrival: clamp to the waypoint, carry the leftover time.
        left -= remaining / s.speed;
        s.pos = target.pos;
        s.vertex = target.vertex;
        s.waypoints.pop_front();
        if (s.waypoints.empty())
            pause(s, ctx.params, rng);
        else
            start_leg(s, t + (dt - left), events);
    }
}

MobilityTrace simulate_mobility(const MobilityContext& ctx, int nodes, std::uint64_t seed,
                                std::span<const double> sample_times, double dt, bool record_events)
{
    if (!(dt > 0.0))
        throw ConfigError("dt", "must be positive");
    Rng init = make_rng(seed, 0);
    auto states = init_nodes(nodes, ctx.params.classes, ctx.map.graph(), init, ctx.params.initial_pause);
    std::vector<Rng> rngs;
    rngs.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        rngs.push_back(make_rng(seed, 2, i));

    MobilityTrace trace;
    for (const auto& s : states) {
        trace.initial.push_back(s.pos);
        trace.classes.push_back(s.class_id);
    }
    std::vector<std::vector<TraceEvent>> per_node(record_events ? states.size() : 0);

    double t = 0.0;
    for (const double ts : sample_times) {
        while (t < ts) {
            const double h = std::min(dt, ts - t);
            for (std::size_t i = 0; i < states.size(); ++i)
                step_node(states[i], t, h, ctx, rngs[i], record_events ? &per_node[i] : nullptr);
            t += h;
            if (ts - t <= 1e-9 * std::max(1.0, ts))
                t = ts;
        }
        std::vector<Point> snapshot;
        snapshot.reserve(states.size());
        for (const auto& s : states)
            snapshot.push_back(s.pos);
        trace.times.push_back(ts);
        trace.positions.push_back(std::move(snapshot));
    }

    for (auto& evs : per_node)
        trace.events.insert(trace.events.end(), evs.begin(), evs.end());
    std::stable_sort(trace.events.begin(), trace.events.end(), [](const TraceEvent& a, const TraceEvent& b) {
        return a.time < b.time || (a.time == b.time && a.node < b.node);
    });
    return trace;
}

}  // namespace fmm
