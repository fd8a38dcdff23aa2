#pragma once

#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fmm/geometry.hpp"

namespace fmm {

struct Edge {
    int u = 0;
    int v = 0;
    double length = 0.0;
};

struct Neighbor {
    int vertex = 0;
    double length = 0.0;
};

/// Undirected pathway graph. Vertex ids are the indices 0..n-1. The
/// constructor validates: no self-loops, no duplicate edges, connected.
class PathGraph {
public:
    PathGraph(std::vector<Point> vertices, const std::vector<std::pair<int, int>>& edges);

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    Point position(int v) const { return vertices_.at(static_cast<std::size_t>(v)); }
    std::span<const Point> vertices() const noexcept { return vertices_; }
    std::span<const Edge> edges() const noexcept { return edges_; }
    /// Sorted by neighbor id.
    std::span<const Neighbor> neighbors(int v) const { return adjacency_.at(static_cast<std::size_t>(v)); }
    bool contains(int v) const noexcept { return v >= 0 && static_cast<std::size_t>(v) < vertices_.size(); }

private:
    std::vector<Point> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

struct Site {
    int id = 0;
    std::string name;
    Point center;
    int anchor_vertex = 0;
};

/// Site-to-site center distances.
class DistanceMatrix {
public:
    explicit DistanceMatrix(std::span<const Site> sites);

    double at(int i, int j) const { return d_.at(static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)); }
    double max_dis() const noexcept { return max_dis_; }
    std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
    double max_dis_ = 0.0;
};

/// Loaded city: the path graph, its sites (ids 0..k-1 in order) and their
/// distance matrix. Immutable after construction.
class CityMap {
public:
    CityMap(PathGraph graph, std::vector<Site> sites);

    const PathGraph& graph() const noexcept { return graph_; }
    std::span<const Site> sites() const noexcept { return sites_; }
    const Site& site(int id) const { return sites_.at(static_cast<std::size_t>(id)); }
    const DistanceMatrix& distances() const noexcept { return distances_; }
    std::vector<Point> site_centers() const;
    /// -1 when no site has that name.
    int site_index(std::string_view name) const noexcept;
    /// Site whose anchor is `vertex`, or -1.
    int site_at_vertex(int vertex) const noexcept;

private:
    PathGraph graph_;
    std::vector<Site> sites_;
    DistanceMatrix distances_;
};

/// Parses a map description:
///
///     [vertices]      id,x,y
///     [edges]         u,v
///     [sites]         id,name,x,y,anchor_vertex
///
/// Blank lines and lines starting with '#' are ignored. Errors are
/// ConfigError keyed by `source:line` or by the offending entity.
CityMap load_map(std::istream& in, const std::string& source = "<map>");
CityMap load_map_file(const std::string& path);

/// The built-in 10 km x 10 km city with the eight default sites.
const CityMap& paper_city();

struct Path {
    std::vector<int> vertices;
    double length = 0.0;
};

/// Dijkstra over metric edge lengths. Among equal-length shortest paths the
/// lexicographically smallest vertex sequence is returned. Throws
/// NoPathError when `dst` is unreachable, std::out_of_range on bad ids.
Path shortest_path(const PathGraph& g, int src, int dst);

/// Site with the nearest center; ties go to the smaller id. Throws
/// ConfigError on an empty list.
const Site& nearest_site(Point p, std::span<const Site> sites);

/// Graph vertex nearest to `p`, ties to the smaller id.
int nearest_vertex(const PathGraph& g, Point p);

}  // namespace fmm
