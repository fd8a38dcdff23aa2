#pragma once

// Unit-disk connectivity, broken-link counting, minimum-hop routing and a
// CBR traffic layer that turns a mobility run into network metrics.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fmm/geometry.hpp"

namespace fmm {

struct ConnectivitySnapshot {
    double time = 0.0;
    /// neighbors[i] sorted ascending; symmetric and irreflexive.
    std::vector<std::vector<int>> neighbors;

    std::size_t node_count() const noexcept { return neighbors.size(); }
    std::size_t link_count() const noexcept;
    bool adjacent(int i, int j) const;
};

/// i and j are neighbors iff |pos_i - pos_j| <= range.
ConnectivitySnapshot snapshot_connectivity(std::span<const Point> positions, double range, double time);

/// Pairs adjacent at snapshot k and not at k+1, summed over k. Throws
/// InputError when node sets differ or times do not strictly increase.
std::size_t count_broken_links(std::span<const ConnectivitySnapshot> snapshots);

struct RouteResult {
    std::vector<int> path;  // src..dst inclusive; empty when src == dst
    std::size_t flood_reach = 0;  // nodes reached by the discovery flood, src included

    std::size_t hops() const noexcept { return path.empty() ? 0 : path.size() - 1; }
};

/// Breadth-first minimum-hop route; among equal-hop routes the smallest
/// next-hop id wins at every step. nullopt when dst is unreachable.
std::optional<RouteResult> route(const ConnectivitySnapshot& snapshot, int src, int dst);

/// Number of nodes a flood from `src` reaches, `src` included.
std::size_t flood_reach(const ConnectivitySnapshot& snapshot, int src);

struct CbrSession {
    int source = 0;
    int destination = 1;
    double start = 0.0;       // s
    int packet_bytes = 512;
    double rate = 4.0;        // packets/s
    int max_packets = 6000;
};

struct LinkParams {
    double bandwidth_bps = 2e6;
    double per_hop_latency = 0.002;  // s

    double per_hop_delay(int packet_bytes) const { return packet_bytes * 8.0 / bandwidth_bps + per_hop_latency; }
};

struct MetricsReport {
    double node_density = 0.0;        // mean neighbors per node per snapshot
    std::size_t broken_links = 0;
    double delivered_fraction = 0.0;  // delivered / sent
    std::size_t routing_overhead = 0; // flood transmissions
    std::optional<double> end_to_end_delay;  // mean over delivered packets, s
    std::size_t packets_sent = 0;
    std::size_t packets_delivered = 0;
};

inline constexpr std::string_view kMetricNames[] = {"node_density", "broken_links", "delivered_fraction",
                                                    "routing_overhead", "end_to_end_delay"};

/// Value of metric `index` (order of kMetricNames); nullopt for an absent delay.
std::optional<double> metric_value(const MetricsReport& report, std::size_t index);

/// Replays CBR sessions over time-ordered snapshots. Packets are emitted at
/// start + k/rate (k < max_packets, time < end_time) and routed on the
/// latest snapshot at or before emission. Each session caches its route; a
/// discovery flood is charged to routing_overhead when the session starts,
/// when a link of the cached route is gone, and (at most once per snapshot)
/// while no route is cached. A packet without a route is lost.
MetricsReport run_traffic(std::span<const ConnectivitySnapshot> snapshots, std::span<const CbrSession> sessions,
                          double end_time, const LinkParams& link = {});

struct MetricSummary {
    double mean = 0.0;
    double sd = 0.0;      // sample standard deviation; 0 for a single value
    std::size_t count = 0;  // reports contributing (delay may be absent)
};

struct AggregateReport {
    MetricSummary metrics[5];  // order of kMetricNames
};

/// Per-metric mean and sample standard deviation. Absent delays are skipped.
AggregateReport aggregate_runs(std::span<const MetricsReport> reports);

}  // namespace fmm
