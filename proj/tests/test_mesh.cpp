#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <minklab/mesh.hpp>

using namespace minklab;
using Catch::Approx;

namespace {

SolverConfig cfg_with_h(double h) {
    SolverConfig cfg;
    cfg.mesh_h = h;
    return cfg;
}

/// Structural invariants every mesh must satisfy.
void check_mesh(const Mesh& m, const ConvexBody& body, double h) {
    REQUIRE(m.nodes.size() >= 3);
    REQUIRE(!m.triangles.empty());
    REQUIRE(m.min_angle_deg >= 20.0 - 1e-9);

    // Triangles are CCW and cover the polygon exactly.
    for (const auto& t : m.triangles) {
        Vec2 a = m.nodes[t[0]], b = m.nodes[t[1]], c = m.nodes[t[2]];
        REQUIRE(cross(b - a, c - a) > 0.0);
    }
    REQUIRE(mesh_area(m) == Approx(body.area).epsilon(1e-12));

    // All nodes inside the closed body; boundary nodes on the boundary.
    double scale = std::sqrt(body.area);
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
        double worst = -1e300;
        for (std::size_t j = 0; j < body.edges.size(); ++j) {
            double d = dot(m.nodes[i] - body.vertices[j], body.edges[j].normal);
            worst = std::max(worst, d);
        }
        REQUIRE(worst <= 1e-9 * scale);
        if (m.on_boundary[i]) REQUIRE(std::abs(worst) <= 1e-9 * scale);
        else REQUIRE(worst < 0.0);
    }

    // Boundary segments: short, tagged, conforming, and a single closed loop.
    std::map<std::pair<int, int>, int> edge_use;
    for (const auto& t : m.triangles) {
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            edge_use[{std::min(a, b), std::max(a, b)}]++;
        }
    }
    std::map<int, int> out_deg, in_deg;
    for (const auto& s : m.boundary) {
        REQUIRE(m.on_boundary[s.a]);
        REQUIRE(m.on_boundary[s.b]);
        double len = dist(m.nodes[s.a], m.nodes[s.b]);
        REQUIRE(len <= h * (1.0 + 1e-9));
        REQUIRE(edge_use[{std::min(s.a, s.b), std::max(s.a, s.b)}] == 1);
        // The tagged body edge actually contains the segment.
        const BodyEdge& e = body.edges[s.body_edge];
        Vec2 v0 = body.vertices[s.body_edge];
        Vec2 mid = 0.5 * (m.nodes[s.a] + m.nodes[s.b]);
        REQUIRE(std::abs(dot(mid - v0, e.normal)) <= 1e-9 * scale);
        out_deg[s.a]++;
        in_deg[s.b]++;
    }
    for (auto [n, d] : out_deg) REQUIRE(d == 1);
    for (auto [n, d] : in_deg) REQUIRE(d == 1);
    // Interior edges are shared by exactly two triangles.
    std::size_t n_boundary_edges = m.boundary.size();
    for (auto& [e, uses] : edge_use) REQUIRE((uses == 1 || uses == 2));
    std::size_t single = 0;
    for (auto& [e, uses] : edge_use) single += (uses == 1);
    REQUIRE(single == n_boundary_edges);
}

} // namespace

TEST_CASE("triangulate the square at several resolutions", "[mesh]") {
    ConvexBody sq = square_body(1.0);
    for (double h : {0.5, 0.2, 0.1, 0.05}) {
        Mesh m = triangulate(sq, cfg_with_h(h));
        check_mesh(m, sq, h);
    }
}

TEST_CASE("triangulate the disk and random bodies", "[mesh]") {
    Mesh md = triangulate(disk_body(), cfg_with_h(0.05));
    check_mesh(md, disk_body(), 0.05);

    for (std::uint64_t seed : {2u, 7u, 19u, 23u, 71u}) {
        ConvexBody k = random_convex_body(seed);
        Mesh m = triangulate(k, cfg_with_h(0.08));
        check_mesh(m, k, 0.08);
    }
}

TEST_CASE("meshing is deterministic", "[mesh]") {
    ConvexBody k = random_convex_body(5);
    Mesh a = triangulate(k, cfg_with_h(0.07));
    Mesh b = triangulate(k, cfg_with_h(0.07));
    REQUIRE(a.nodes.size() == b.nodes.size());
    REQUIRE(a.triangles.size() == b.triangles.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        REQUIRE(a.nodes[i].x == b.nodes[i].x);
        REQUIRE(a.nodes[i].y == b.nodes[i].y);
    }
}

TEST_CASE("meshing commutes with doubling", "[mesh]") {
    ConvexBody k = random_convex_body(11);
    ConvexBody k2 = transform(k, 2.0, {0, 0});
    Mesh a = triangulate(k, cfg_with_h(0.06));
    Mesh b = triangulate(k2, cfg_with_h(0.12));
    REQUIRE(a.nodes.size() == b.nodes.size());
    REQUIRE(a.triangles.size() == b.triangles.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        REQUIRE(b.nodes[i].x == Approx(2.0 * a.nodes[i].x).margin(1e-13));
        REQUIRE(b.nodes[i].y == Approx(2.0 * a.nodes[i].y).margin(1e-13));
    }
    for (std::size_t i = 0; i < a.triangles.size(); ++i)
        REQUIRE(a.triangles[i] == b.triangles[i]);
}

TEST_CASE("node count grows quadratically as h shrinks", "[mesh]") {
    ConvexBody sq = square_body(1.0);
    std::size_t n1 = triangulate(sq, cfg_with_h(0.1)).nodes.size();
    std::size_t n2 = triangulate(sq, cfg_with_h(0.05)).nodes.size();
    double ratio = static_cast<double>(n2) / static_cast<double>(n1);
    REQUIRE(ratio > 3.0);
    REQUIRE(ratio < 5.5);
}

TEST_CASE("point locator finds interior points", "[mesh]") {
    ConvexBody k = random_convex_body(33);
    Mesh m = triangulate(k, cfg_with_h(0.1));
    PointLocator loc(m);
    for (const auto& t : m.triangles) {
        Vec2 g = (m.nodes[t[0]] + m.nodes[t[1]] + m.nodes[t[2]]) * (1.0 / 3.0);
        std::array<double, 3> bary{};
        int found = loc.find(g, &bary);
        REQUIRE(found >= 0);
        auto ft = m.triangles[found];
        Vec2 back = bary[0] * m.nodes[ft[0]] + bary[1] * m.nodes[ft[1]] + bary[2] * m.nodes[ft[2]];
        REQUIRE(dist(back, g) == Approx(0.0).margin(1e-10));
    }
    REQUIRE(loc.find({100.0, 100.0}) == -1);
}

TEST_CASE("triangulate validates its configuration", "[mesh]") {
    ConvexBody sq = square_body(1.0);
    SolverConfig bad;
    bad.mesh_h = 0.0;
    REQUIRE_THROWS_AS(triangulate(sq, bad), GeometryError);
    bad.mesh_h = 0.1;
    bad.beta = 1.0;
    REQUIRE_THROWS_AS(triangulate(sq, bad), GeometryError);
}

TEST_CASE("mesh handles a body whose edges need several samples", "[mesh]") {
    // Long thin-ish rectangle exercises anisotropic boundary sampling.
    ConvexBody rect = make_body({{-2, -0.5}, {2, -0.5}, {2, 0.5}, {-2, 0.5}});
    Mesh m = triangulate(rect, cfg_with_h(0.15));
    check_mesh(m, rect, 0.15);
}
