#include "fmm/environment.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "fmm/bundled.hpp"
#include "fmm/error.hpp"
#include "text.hpp"

namespace fmm {

PathGraph::PathGraph(std::vector<Point> vertices, const std::vector<std::pair<int, int>>& edges)
    : vertices_(std::move(vertices)), adjacency_(vertices_.size())
{
    if (vertices_.empty())
        throw ConfigError("vertices", "graph has no vertices");
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (!is_finite(vertices_[i]))
            throw ConfigError("vertex " + std::to_string(i), "coordinates must be finite");

    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        const std::string key = "edge " + std::to_string(u) + "-" + std::to_string(v);
        if (!contains(u) || !contains(v))
            throw ConfigError(key, "references an unknown vertex");
        if (u == v)
            throw ConfigError(key, "self-loop");
        if (!seen.insert({std::min(u, v), std::max(u, v)}).second)
            throw ConfigError(key, "duplicate edge");
        const double len = euclidean_distance(vertices_[u], vertices_[v]);
        if (!(len > 0.0))
            throw ConfigError(key, "endpoints coincide");
        edges_.push_back({u, v, len});
        adjacency_[u].push_back({v, len});
        adjacency_[v].push_back({u, len});
    }
    for (auto& adj : adjacency_)
        std::sort(adj.begin(), adj.end(), [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });

    std::vector<char> reached(vertices_.size(), 0);
    std::vector<int> stack{0};
    reached[0] = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (const auto& n : adjacency_[u])
            if (!reached[n.vertex]) {
                reached[n.vertex] = 1;
                stack.push_back(n.vertex);
            }
    }
    const auto it = std::find(reached.begin(), reached.end(), 0);
    if (it != reached.end())
        throw ConfigError("vertex " + std::to_string(it - reached.begin()),
                          "graph is disconnected: vertex unreachable from vertex 0");
}

DistanceMatrix::DistanceMatrix(std::span<const Site> sites) : n_(sites.size()), d_(n_ * n_, 0.0)
{
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double d = euclidean_distance(sites[i].center, sites[j].center);
            d_[i * n_ + j] = d;
            d_[j * n_ + i] = d;
            max_dis_ = std::max(max_dis_, d);
        }
}

CityMap::CityMap(PathGraph graph, std::vector<Site> sites)
    : graph_(std::move(graph)), sites_(std::move(sites)), distances_(sites_)
{
    std::set<std::string> names;
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        const auto& s = sites_[i];
        const std::string key = "site " + (s.name.empty() ? std::to_string(s.id) : s.name);
        if (s.id != static_cast<int>(i))
            throw ConfigError(key, "site ids must be 0..n-1 in order");
        if (s.name.empty())
            throw ConfigError(key, "site needs a name");
        if (!names.insert(s.name).second)
            throw ConfigError(key, "duplicate site name");
        if (!is_finite(s.center))
            throw ConfigError(key, "center must be finite");
        if (!graph_.contains(s.anchor_vertex))
            throw ConfigError(key, "dangling anchor vertex " + std::to_string(s.anchor_vertex));
    }
}

std::vector<Point> CityMap::site_centers() const
{
    std::vector<Point> out;
    out.reserve(sites_.size());
    for (const auto& s : sites_)
        out.push_back(s.center);
    return out;
}

int CityMap::site_index(std::string_view name) const noexcept
{
    for (const auto& s : sites_)
        if (s.name == name)
            return s.id;
    return -1;
}

int CityMap::site_at_vertex(int vertex) const noexcept
{
    for (const auto& s : sites_)
        if (s.anchor_vertex == vertex)
            return s.id;
    return -1;
}

CityMap load_map(std::istream& in, const std::string& source)
{
    enum class Section { None, Vertices, Edges, Sites } section = Section::None;
    std::map<int, Point> vertex_by_id;
    std::vector<std::pair<int, int>> edges;
    std::vector<Site> sites;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = source + ":" + std::to_string(lineno);
        const auto body = text::trim(line);
        if (body.empty() || body.front() == '#')
            continue;
        if (body.front() == '[') {
            if (body == "[vertices]")
                section = Section::Vertices;
            else if (body == "[edges]")
                section = Section::Edges;
            else if (body == "[sites]")
                section = Section::Sites;
            else
                throw ConfigError(where, "unknown section " + std::string(body));
            continue;
        }
        const auto f = text::split(body, ',');
        try {
            switch (section) {
            case Section::None:
                throw ConfigError(where, "data before the first section header");
            case Section::Vertices: {
                if (f.size() != 3)
                    throw ConfigError(where, "vertex rows are id,x,y");
                const int id = text::to_int(f[0]);
                if (!vertex_by_id.emplace(id, Point{text::to_double(f[1]), text::to_double(f[2])}).second)
                    throw ConfigError("vertex " + std::to_string(id), "duplicate vertex id");
                break;
            }
            case Section::Edges:
                if (f.size() != 2)
                    throw ConfigError(where, "edge rows are u,v");
                edges.emplace_back(text::to_int(f[0]), text::to_int(f[1]));
                break;
            case Section::Sites:
                if (f.size() != 5)
                    throw ConfigError(where, "site rows are id,name,x,y,anchor_vertex");
                sites.push_back({text::to_int(f[0]), std::string(f[1]),
                                 Point{text::to_double(f[2]), text::to_double(f[3])}, text::to_int(f[4])});
                break;
            }
        } catch (const text::ParseError& e) {
            throw ConfigError(where, e.what());
        }
    }

    std::vector<Point> vertices;
    vertices.reserve(vertex_by_id.size());
    int expected = 0;
    for (const auto& [id, p] : vertex_by_id) {
        if (id != expected)
            throw ConfigError("vertex " + std::to_string(expected), "vertex ids must be contiguous from 0");
        vertices.push_back(p);
        ++expected;
    }
    std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) { return a.id < b.id; });
    if (sites.empty())
        throw ConfigError(source, "map defines no sites");
    return CityMap(PathGraph(std::move(vertices), edges), std::move(sites));
}

CityMap load_map_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path, "cannot open map file");
    return load_map(in, path);
}

const CityMap& paper_city()
{
    static const CityMap city = [] {
        std::istringstream in{std::string(bundled::paper_city_map)};
        return load_map(in, "paper_city");
    }();
    return city;
}

Path shortest_path(const PathGraph& g, int src, int dst)
{
    if (!g.contains(src) || !g.contains(dst))
        throw std::out_of_range("shortest_path: unknown vertex");
    if (src == dst)
        return {{src}, 0.0};

    // Distances to dst; the forward walk then picks the smallest-id neighbor
    // that stays on a shortest path, which yields the lexicographically
    // smallest sequence.
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.vertex_count(), inf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[dst] = 0.0;
    queue.push({0.0, dst});
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u])
            continue;
        for (const auto& n : g.neighbors(u)) {
            const double nd = d + n.length;
            if (nd < dist[n.vertex]) {
                dist[n.vertex] = nd;
                queue.push({nd, n.vertex});
            }
        }
    }
    if (dist[src] == inf)
        throw NoPathError("no path from vertex " + std::to_string(src) + " to " + std::to_string(dst));

    Path path;
    path.vertices.push_back(src);
    int u = src;
    while (u != dst) {
        const double tol = 1e-9 * std::max(1.0, dist[u]);
        int next = -1;
        double step = 0.0;
        for (const auto& n : g.neighbors(u)) {
            if (std::abs(n.length + dist[n.vertex] - dist[u]) <= tol && dist[n.vertex] < dist[u]) {
                next = n.vertex;
                step = n.length;
                break;
            }
        }
        if (next < 0)
            throw NoPathError("shortest path reconstruction failed");
        path.length += step;
        path.vertices.push_back(next);
        u = next;
    }
    return path;
}

const Site& nearest_site(Point p, std::span<const Site> sites)
{
    if (sites.empty())
        throw ConfigError("sites", "site list is empty");
    const Site* best = &sites.front();
    double best_d = squared_distance(p, best->center);
    for (const auto& s : sites.subspan(1)) {
        const double d = squared_distance(p, s.center);
        if (d < best_d || (d == best_d && s.id < best->id)) {
            best = &s;
            best_d = d;
        }
    }
    return *best;
}

int nearest_vertex(const PathGraph& g, Point p)
{
    int best = 0;
    double best_d = squared_distance(p, g.position(0));
    for (int v = 1; v < static_cast<int>(g.vertex_count()); ++v) {
        const double d = squared_distance(p, g.position(v));
        if (d < best_d) {
            best = v;
            best_d = d;
        }
    }
    return best;
}

}  // namespace fmm
