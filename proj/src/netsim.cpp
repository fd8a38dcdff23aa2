#include "fmm/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "fmm/error.hpp"

namespace fmm {

std::size_t ConnectivitySnapshot::link_count() const noexcept
{
    std::size_t degree_sum = 0;
    for (const auto& n : neighbors)
        degree_sum += n.size();
    return degree_sum / 2;
}

bool ConnectivitySnapshot::adjacent(int i, int j) const
{
    const auto& n = neighbors.at(static_cast<std::size_t>(i));
    return std::binary_search(n.begin(), n.end(), j);
}

ConnectivitySnapshot snapshot_connectivity(std::span<const Point> positions, double range, double time)
{
    if (!(range > 0.0))
        throw InputError("transmission range must be positive");
    ConnectivitySnapshot snap;
    snap.time = time;
    snap.neighbors.resize(positions.size());
    const double r2 = range * range;
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            if (squared_distance(positions[i], positions[j]) <= r2) {
                snap.neighbors[i].push_back(static_cast<int>(j));
                snap.neighbors[j].push_back(static_cast<int>(i));
            }
    // j ascends in the inner loop and i-entries are appended in ascending i,
    // so every list is already sorted.
    return snap;
}

std::size_t count_broken_links(std::span<const ConnectivitySnapshot> snapshots)
{
    std::size_t breaks = 0;
    for (std::size_t k = 1; k < snapshots.size(); ++k) {
        const auto& before = snapshots[k - 1];
        const auto& after = snapshots[k];
        if (before.node_count() != after.node_count())
            throw InputError("snapshots cover different node sets");
        if (!(after.time > before.time))
            throw InputError("snapshot times must strictly increase");
        for (std::size_t i = 0; i < before.node_count(); ++i)
            for (const int j : before.neighbors[i])
                if (static_cast<int>(i) < j && !after.adjacent(static_cast<int>(i), j))
                    ++breaks;
    }
    return breaks;
}

namespace {

// BFS from src visiting neighbors in ascending id order; parent[] gives the
// smallest-id predecessor chain. Returns the number of nodes reached.
std::size_t bfs(const ConnectivitySnapshot& snap, int src, std::vector<int>& parent)
{
    parent.assign(snap.node_count(), -2);
    std::queue<int> q;
    parent[static_cast<std::size_t>(src)] = -1;
    q.push(src);
    std::size_t reached = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (const int v : snap.neighbors[static_cast<std::size_t>(u)])
            if (parent[static_cast<std::size_t>(v)] == -2) {
                parent[static_cast<std::size_t>(v)] = u;
                ++reached;
                q.push(v);
            }
    }
    return reached;
}

}  // namespace

std::size_t flood_reach(const ConnectivitySnapshot& snapshot, int src)
{
    std::vector<int> parent;
    return bfs(snapshot, src, parent);
}

std::optional<RouteResult> route(const ConnectivitySnapshot& snapshot, int src, int dst)
{
    const auto n = static_cast<int>(snapshot.node_count());
    if (src < 0 || src >= n || dst < 0 || dst >= n)
        throw InputError("route endpoints must be snapshot nodes");

    // Hop distances to dst; walking forward through the smallest-id neighbor
    // one hop closer gives the smallest next hop at every step.
    std::vector<int> parent;
    RouteResult result;
    result.flood_reach = bfs(snapshot, src, parent);
    if (src == dst)
        return result;
    if (parent[static_cast<std::size_t>(dst)] == -2)
        return std::nullopt;

    std::vector<int> to_dst(snapshot.node_count(), -1);
    std::queue<int> q;
    to_dst[static_cast<std::size_t>(dst)] = 0;
    q.push(dst);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (const int v : snapshot.neighbors[static_cast<std::size_t>(u)])
            if (to_dst[static_cast<std::size_t>(v)] < 0) {
                to_dst[static_cast<std::size_t>(v)] = to_dst[static_cast<std::size_t>(u)] + 1;
                q.push(v);
            }
    }
    int u = src;
    result.path.push_back(u);
    while (u != dst) {
        for (const int v : snapshot.neighbors[static_cast<std::size_t>(u)])
            if (to_dst[static_cast<std::size_t>(v)] == to_dst[static_cast<std::size_t>(u)] - 1) {
                u = v;
                break;
            }
        result.path.push_back(u);
    }
    return result;
}

std::optional<double> metric_value(const MetricsReport& r, std::size_t index)
{
    switch (index) {
    case 0:
        return r.node_density;
    case 1:
        return static_cast<double>(r.broken_links);
    case 2:
        return r.delivered_fraction;
    case 3:
        return static_cast<double>(r.routing_overhead);
    case 4:
        return r.end_to_end_delay;
    }
    throw std::out_of_range("metric index");
}

namespace {

bool route_intact(const ConnectivitySnapshot& snap, const std::vector<int>& path)
{
    for (std::size_t i = 1; i < path.size(); ++i)
        if (!snap.adjacent(path[i - 1], path[i]))
            return false;
    return true;
}

}  // namespace

MetricsReport run_traffic(std::span<const ConnectivitySnapshot> snapshots, std::span<const CbrSession> sessions,
                          double end_time, const LinkParams& link)
{
    MetricsReport report;
    if (snapshots.empty())
        return report;

    double density_sum = 0.0;
    for (const auto& s : snapshots) {
        if (s.node_count() > 0)
            density_sum += 2.0 * static_cast<double>(s.link_count()) / static_cast<double>(s.node_count());
    }
    report.node_density = density_sum / static_cast<double>(snapshots.size());
    report.broken_links = count_broken_links(snapshots);

    const auto nodes = static_cast<int>(snapshots.front().node_count());
    double delay_sum = 0.0;
    for (const auto& session : sessions) {
        if (session.source == session.destination || session.source < 0 || session.source >= nodes ||
            session.destination < 0 || session.destination >= nodes)
            throw InputError("session endpoints must be distinct live nodes");
        if (!(session.rate > 0.0))
            throw InputError("session rate must be positive");

        const double hop_delay = link.per_hop_delay(session.packet_bytes);
        std::vector<int> cached;
        std::ptrdiff_t last_discovery = -1;
        std::size_t snap_index = 0;
        for (int k = 0; k < session.max_packets; ++k) {
            const double t = session.start + k / session.rate;
            if (t >= end_time)
                break;
            while (snap_index + 1 < snapshots.size() && snapshots[snap_index + 1].time <= t)
                ++snap_index;
            ++report.packets_sent;
            if (snapshots[snap_index].time > t)
                continue;  // no topology known yet
            const auto& snap = snapshots[snap_index];

            if (cached.empty() || !route_intact(snap, cached)) {
                if (last_discovery == static_cast<std::ptrdiff_t>(snap_index))
                    continue;  // already flooded on this topology without success
                last_discovery = static_cast<std::ptrdiff_t>(snap_index);
                const auto found = route(snap, session.source, session.destination);
                report.routing_overhead += flood_reach(snap, session.source);
                cached = found ? found->path : std::vector<int>{};
                if (cached.empty())
                    continue;
            }
            ++report.packets_delivered;
            delay_sum += static_cast<double>(cached.size() - 1) * hop_delay;
        }
    }
    if (report.packets_sent > 0)
        report.delivered_fraction =
            static_cast<double>(report.packets_delivered) / static_cast<double>(report.packets_sent);
    if (report.packets_delivered > 0)
        report.end_to_end_delay = delay_sum / static_cast<double>(report.packets_delivered);
    return report;
}

AggregateReport aggregate_runs(std::span<const MetricsReport> reports)
{
    AggregateReport agg;
    for (std::size_t m = 0; m < 5; ++m) {
        std::vector<double> values;
        for (const auto& r : reports)
            if (const auto v = metric_value(r, m))
                values.push_back(*v);
        auto& s = agg.metrics[m];
        s.count = values.size();
        if (values.empty())
            continue;
        double sum = 0.0;
        for (double v : values)
            sum += v;
        s.mean = sum / static_cast<double>(values.size());
        if (values.size() > 1) {
            double sq = 0.0;
            for (double v : values)
                sq += (v - s.mean) * (v - s.mean);
            s.sd = std::sqrt(sq / static_cast<double>(values.size() - 1));
        }
    }
    return agg;
}

}  // namespace fmm
