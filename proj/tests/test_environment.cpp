#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "fmm/environment.hpp"
#include "fmm/error.hpp"

using namespace fmm;

namespace {

// Exhaustive DFS over all simple paths; returns the shortest length or +inf.
double brute_force_shortest(const std::vector<Point>& pts, const std::vector<std::pair<int, int>>& edges, int src,
                            int dst)
{
    const int n = static_cast<int>(pts.size());
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (auto [u, v] : edges) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<bool> seen(static_cast<std::size_t>(n));
    std::function<void(int, double)> dfs = [&](int u, double len) {
        if (u == dst) {
            best = std::min(best, len);
            return;
        }
        seen[static_cast<std::size_t>(u)] = true;
        for (int v : adj[static_cast<std::size_t>(u)])
            if (!seen[static_cast<std::size_t>(v)]) {
                const double dx = pts[static_cast<std::size_t>(u)].x - pts[static_cast<std::size_t>(v)].x;
                const double dy = pts[static_cast<std::size_t>(u)].y - pts[static_cast<std::size_t>(v)].y;
                dfs(v, len + std::sqrt(dx * dx + dy * dy));
            }
        seen[static_cast<std::size_t>(u)] = false;
    };
    dfs(src, 0.0);
    return best;
}

struct RandomGraph {
    std::vector<Point> pts;
    std::vector<std::pair<int, int>> edges;
};

RandomGraph random_connected_graph(std::mt19937_64& rng, int max_n)
{
    std::uniform_int_distribution<int> size(2, max_n);
    std::uniform_real_distribution<double> coord(0.0, 1000.0);
    RandomGraph g;
    const int n = size(rng);
    for (int i = 0; i < n; ++i)
        g.pts.push_back({std::round(coord(rng)), std::round(coord(rng))});
    // Random spanning tree then extra edges.
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> parent(0, i - 1);
        g.edges.push_back({parent(rng), i});
    }
    std::bernoulli_distribution extra(0.35);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (std::find(g.edges.begin(), g.edges.end(), std::pair{u, v}) == g.edges.end() &&
                std::find(g.edges.begin(), g.edges.end(), std::pair{v, u}) == g.edges.end() && extra(rng))
                g.edges.push_back({u, v});
    for (auto& e : g.edges)
        if (e.first > e.second)
            std::swap(e.first, e.second);
    // Distinct positions keep every edge length positive.
    for (std::size_t i = 0; i < g.pts.size(); ++i)
        g.pts[i].x += static_cast<double>(i) * 1e-3;
    return g;
}

}  // namespace

TEST_CASE("euclidean distance")
{
    CHECK(euclidean_distance({0, 0}, {3, 4}) == 5.0);
    CHECK(euclidean_distance({7500, 6500}, {7500, 6500}) == 0.0);
}

TEST_CASE("bundled map")
{
    const auto& map = paper_city();
    REQUIRE(map.sites().size() == 8);
    const int e = map.site_index("Emergency");
    REQUIRE(e >= 0);
    CHECK(map.site(e).center == Point{7500, 6500});
    CHECK(std::abs(map.distances().max_dis() - 8060.0) <= 1.0);
    for (const auto& s : map.sites())
        CHECK(map.graph().contains(s.anchor_vertex));
}

TEST_CASE("minimal map loads")
{
    std::istringstream in(R"(# tiny
[vertices]
0,0,0
1,100,0
[edges]
0,1
[sites]
0,Depot,10,0,0
)");
    const CityMap map = load_map(in, "tiny");
    CHECK(map.graph().vertex_count() == 2);
    CHECK(map.graph().edges().size() == 1);
    CHECK(map.graph().edges()[0].length == 100.0);
    CHECK(map.sites().size() == 1);
    CHECK(map.site_at_vertex(0) == 0);
    CHECK(map.site_at_vertex(1) == -1);
}

TEST_CASE("isolated vertex is rejected")
{
    std::istringstream in(R"([vertices]
0,0,0
1,100,0
2,500,500
[edges]
0,1
[sites]
0,Depot,0,0,0
)");
    CHECK_THROWS_AS(load_map(in), ConfigError);
}

TEST_CASE("graph validation")
{
    CHECK_THROWS_AS(PathGraph({{0, 0}, {1, 0}}, {{0, 0}}), ConfigError);
    CHECK_THROWS_AS(PathGraph({{0, 0}, {1, 0}}, {{0, 1}, {1, 0}}), ConfigError);
    CHECK_THROWS_AS(PathGraph({{0, 0}, {1, 0}}, {{0, 2}}), ConfigError);
    CHECK_THROWS_AS(PathGraph({{0, 0}, {0, 0}}, {{0, 1}}), ConfigError);
    CHECK_THROWS_AS(PathGraph({}, {}), ConfigError);
}

TEST_CASE("shortest path: degenerate and triangle")
{
    const PathGraph tri({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}, {{0, 1}, {1, 2}, {0, 2}});
    const Path self = shortest_path(tri, 2, 2);
    CHECK(self.vertices == std::vector<int>{2});
    CHECK(self.length == 0.0);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            if (a != b) {
                const Path p = shortest_path(tri, a, b);
                CHECK(p.vertices == std::vector<int>{a, b});
                CHECK(p.length == doctest::Approx(1.0));
            }
    CHECK_THROWS_AS(shortest_path(tri, 0, 7), std::out_of_range);
}

TEST_CASE("shortest path: ties resolve to the lexicographically smallest sequence")
{
    // Unit square: 0-1-3 and 0-2-3 have equal length.
    const PathGraph sq({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    CHECK(shortest_path(sq, 0, 3).vertices == std::vector<int>{0, 1, 3});
    CHECK(shortest_path(sq, 3, 0).vertices == std::vector<int>{3, 1, 0});
}

TEST_CASE("shortest path matches exhaustive enumeration on random graphs")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = random_connected_graph(rng, 8);
        const PathGraph pg(g.pts, g.edges);
        const int n = static_cast<int>(g.pts.size());
        for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t) {
                const Path p = shortest_path(pg, s, t);
                CHECK(p.length == doctest::Approx(brute_force_shortest(g.pts, g.edges, s, t)).epsilon(1e-12));
                CHECK(p.vertices.front() == s);
                CHECK(p.vertices.back() == t);
                double sum = 0.0;
                for (std::size_t i = 1; i < p.vertices.size(); ++i)
                    sum += euclidean_distance(pg.position(p.vertices[i - 1]), pg.position(p.vertices[i]));
                CHECK(sum == doctest::Approx(p.length));
            }
    }
}

TEST_CASE("nearest site")
{
    const auto& map = paper_city();
    const auto sites = map.sites();
    CHECK(nearest_site({7500, 6500}, sites).name == "Emergency");

    const std::vector<Site> two{{0, "A", {0, 0}, 0}, {1, "B", {10, 0}, 0}};
    CHECK(nearest_site({5, 3}, two).id == 0);
    CHECK_THROWS_AS(nearest_site({0, 0}, std::span<const Site>{}), ConfigError);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 10000.0);
    for (int i = 0; i < 100; ++i) {
        const Point p{u(rng), u(rng)};
        int best = 0;
        for (std::size_t k = 1; k < sites.size(); ++k)
            if (std::hypot(p.x - sites[k].center.x, p.y - sites[k].center.y) <
                std::hypot(p.x - sites[static_cast<std::size_t>(best)].center.x,
                           p.y - sites[static_cast<std::size_t>(best)].center.y))
                best = static_cast<int>(k);
        CHECK(nearest_site(p, sites).id == best);
    }
}

TEST_CASE("map loader errors carry a key")
{
    std::istringstream dup_site(R"([vertices]
0,0,0
1,1,0
[edges]
0,1
[sites]
0,A,0,0,0
1,A,1,0,1
)");
    CHECK_THROWS_AS(load_map(dup_site), ConfigError);
    std::istringstream bad_anchor(R"([vertices]
0,0,0
1,1,0
[edges]
0,1
[sites]
0,A,0,0,9
)");
    CHECK_THROWS_AS(load_map(bad_anchor), ConfigError);
    CHECK_THROWS_AS(load_map_file("/nonexistent/city.map"), ConfigError);
}
