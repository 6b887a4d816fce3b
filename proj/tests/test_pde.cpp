#include <catch2/catch_amalgamated.hpp>

#include <minklab/defaults.hpp>
#include <minklab/pde.hpp>
#include <minklab/radial.hpp>

using namespace minklab;
using Catch::Approx;

namespace {

SolverConfig cfg_with_h(double h) {
    SolverConfig cfg;
    cfg.mesh_h = h;
    return cfg;
}

} // namespace

TEST_CASE("radial oracle reproduces the torsion closed form at beta=0", "[radial]") {
    // -phi'' - (N-1)/r phi' = 1 solves to (R^2 - r^2) / (2N).
    RadialSolution s2 = radial_oracle(1.0, 2, 0.0);
    REQUIRE(s2.center_value == Approx(0.25).margin(1e-8));
    REQUIRE(s2.boundary_slope == Approx(-0.5).margin(1e-8));

    RadialSolution s3 = radial_oracle(1.0, 3, 0.0);
    REQUIRE(s3.center_value == Approx(1.0 / 6.0).margin(1e-8));
    REQUIRE(s3.boundary_slope == Approx(-1.0 / 3.0).margin(1e-8));

    for (double r : {0.1, 0.35, 0.77}) {
        REQUIRE(radial_value(s2, r) == Approx((1.0 - r * r) / 4.0).margin(1e-7));
    }
}

TEST_CASE("radial oracle matches the pinned disk constants", "[radial]") {
    RadialSolution s = radial_oracle(1.0, 2, 0.5);
    REQUIRE(s.center_value == Approx(pinned::disk_center_value).margin(pinned::pin_tol));
    REQUIRE(s.boundary_slope == Approx(pinned::disk_boundary_slope).margin(pinned::pin_tol));
    REQUIRE(s.step_error <= 1e-9);
    REQUIRE(s.phi.front() == s.center_value);
    REQUIRE(s.phi.back() == 0.0);
    for (std::size_t i = 1; i < s.phi.size(); ++i) REQUIRE(s.phi[i] <= s.phi[i - 1] + 1e-15);
}

TEST_CASE("radial oracle obeys the dilation law", "[radial]") {
    // phi_t(r) = t^{2/(1-beta)} phi(r/t); at beta=1/2 doubling scales
    // values by 16 and slopes by 8.
    RadialSolution s1 = radial_oracle(1.0, 2, 0.5);
    RadialSolution s2 = radial_oracle(2.0, 2, 0.5);
    REQUIRE(s2.center_value == Approx(16.0 * s1.center_value).epsilon(1e-7));
    REQUIRE(s2.boundary_slope == Approx(8.0 * s1.boundary_slope).epsilon(1e-7));
    REQUIRE(radial_value(s2, 1.2) == Approx(16.0 * radial_value(s1, 0.6)).epsilon(1e-5));
}

TEST_CASE("radial oracle validates input", "[radial]") {
    REQUIRE_THROWS_AS(radial_oracle(0.0, 2, 0.5), NonpositiveScale);
    REQUIRE_THROWS_AS(radial_oracle(1.0, 2, 1.0), GeometryError);
    REQUIRE_THROWS_AS(radial_oracle(1.0, 0, 0.5), GeometryError);
}

TEST_CASE("finite element solution tracks the radial oracle on the disk", "[pde]") {
    RadialSolution oracle = radial_oracle(1.0, 2, 0.5);
    ConvexBody disk = disk_body();
    Mesh mesh = triangulate(disk, cfg_with_h(0.04));
    SolveTrace trace;
    ScalarField phi = solve_sublinear(mesh, cfg_with_h(0.04), &trace);

    double worst = 0.0;
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        double ref = radial_value(oracle, norm(mesh.nodes[i]));
        worst = std::max(worst, std::abs(phi.values[i] - ref));
    }
    REQUIRE(worst / oracle.center_value <= 0.02);
    REQUIRE(trace.monotone);
    REQUIRE(trace.iterations < 80);
    REQUIRE(trace.final_residual <= 1e-6);
}

TEST_CASE("iterates decrease geometrically", "[pde]") {
    Mesh mesh = triangulate(square_body(1.0), cfg_with_h(0.08));
    SolveTrace trace;
    solve_sublinear(mesh, cfg_with_h(0.08), &trace);
    REQUIRE(trace.monotone);
    const auto& ch = trace.sup_change;
    REQUIRE(ch.size() >= 4);
    REQUIRE(ch.back() <= 0.75 * ch[ch.size() - 3]);
}

TEST_CASE("solution is strictly positive inside", "[pde]") {
    Mesh mesh = triangulate(random_convex_body(17), cfg_with_h(0.08));
    ScalarField phi = solve_sublinear(mesh, cfg_with_h(0.08));
    for (std::size_t i = 0; i < phi.values.size(); ++i) {
        if (phi.mesh.on_boundary[i]) REQUIRE(phi.values[i] == 0.0);
        else REQUIRE(phi.values[i] > 0.0);
    }
}

TEST_CASE("domain monotonicity: nested squares", "[pde]") {
    ConvexBody outer = square_body(1.0), inner = square_body(0.5);
    ScalarField po = solve_sublinear(triangulate(outer, cfg_with_h(0.05)), cfg_with_h(0.05));
    ScalarField pi = solve_sublinear(triangulate(inner, cfg_with_h(0.05)), cfg_with_h(0.05));
    PointLocator loc(po.mesh);
    double sup = *std::max_element(po.values.begin(), po.values.end());
    for (std::size_t i = 0; i < pi.mesh.nodes.size(); ++i) {
        double outer_val = interpolate(po, loc, pi.mesh.nodes[i]);
        REQUIRE(pi.values[i] <= outer_val + 1e-6 * sup);
    }
}

TEST_CASE("discrete solutions scale exactly with the mesh", "[pde]") {
    // Meshing commutes with doubling and the P1 stiffness matrix is scale
    // free in the plane, so the discrete solution on (2K, 2h) is exactly
    // 2^{2/(1-beta)} = 16 times the one on (K, h).
    ConvexBody k = random_convex_body(29);
    ConvexBody k2 = transform(k, 2.0, {0, 0});
    ScalarField a = solve_sublinear(triangulate(k, cfg_with_h(0.06)), cfg_with_h(0.06));
    ScalarField b = solve_sublinear(triangulate(k2, cfg_with_h(0.12)), cfg_with_h(0.12));
    REQUIRE(a.values.size() == b.values.size());
    double sup = *std::max_element(b.values.begin(), b.values.end());
    for (std::size_t i = 0; i < a.values.size(); ++i)
        REQUIRE(b.values[i] == Approx(16.0 * a.values[i]).margin(1e-6 * sup));
}

TEST_CASE("translation moves the solution with the body", "[pde]") {
    ConvexBody k = random_convex_body(41);
    Vec2 shift{0.37, -0.81};
    ConvexBody kt = translate(k, shift);
    ScalarField a = solve_sublinear(triangulate(k, cfg_with_h(0.06)), cfg_with_h(0.06));
    ScalarField b = solve_sublinear(triangulate(kt, cfg_with_h(0.06)), cfg_with_h(0.06));
    // Different meshes, so compare peak values at discretization accuracy.
    double sa = *std::max_element(a.values.begin(), a.values.end());
    double sb = *std::max_element(b.values.begin(), b.values.end());
    REQUIRE(sb == Approx(sa).epsilon(0.02));
}

TEST_CASE("field stats respect the a-priori bounds", "[pde]") {
    for (std::uint64_t seed : {3u, 13u}) {
        ConvexBody k = random_convex_body(seed);
        ScalarField phi = solve_sublinear(triangulate(k, cfg_with_h(0.07)), cfg_with_h(0.07));
        FieldStats st = field_stats(phi, k);
        REQUIRE(st.bounds_ok);
        REQUIRE(st.sup_phi > 0.0);
        REQUIRE(st.sup_grad > 0.0);
    }
}

TEST_CASE("interpolation reproduces nodal values and plane averages", "[pde]") {
    Mesh mesh = triangulate(square_body(1.0), cfg_with_h(0.2));
    ScalarField phi = solve_sublinear(mesh, cfg_with_h(0.2));
    PointLocator loc(mesh);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        REQUIRE(interpolate(phi, loc, mesh.nodes[i]) == Approx(phi.values[i]).margin(1e-12));
    for (const auto& t : mesh.triangles) {
        Vec2 g = (mesh.nodes[t[0]] + mesh.nodes[t[1]] + mesh.nodes[t[2]]) * (1.0 / 3.0);
        double avg = (phi.values[t[0]] + phi.values[t[1]] + phi.values[t[2]]) / 3.0;
        REQUIRE(interpolate(phi, loc, g) == Approx(avg).margin(1e-12));
    }
    REQUIRE_THROWS_AS(interpolate(phi, loc, Vec2{50, 50}), GeometryError);
}

TEST_CASE("solver raises NonConvergence when starved of iterations", "[pde]") {
    Mesh mesh = triangulate(square_body(1.0), cfg_with_h(0.3));
    SolverConfig cfg = cfg_with_h(0.3);
    cfg.max_iter = 1;
    REQUIRE_THROWS_AS(solve_sublinear(mesh, cfg), NonConvergence);
}

TEST_CASE("solver validates beta", "[pde]") {
    Mesh mesh = triangulate(square_body(1.0), cfg_with_h(0.3));
    SolverConfig cfg = cfg_with_h(0.3);
    cfg.beta = 0.0;
    REQUIRE_THROWS_AS(solve_sublinear(mesh, cfg), GeometryError);
    cfg.beta = 1.0;
    REQUIRE_THROWS_AS(solve_sublinear(mesh, cfg), GeometryError);
}

TEST_CASE("powers of the solution stay concave along chords", "[pde]") {
    // phi^{(1-beta)/2} is concave; test midpoint concavity along segments
    // between interior nodes, with slack for interpolation error.
    SolverConfig cfg = cfg_with_h(0.04);
    ConvexBody k = disk_body();
    ScalarField phi = solve_sublinear(triangulate(k, cfg), cfg);
    PointLocator loc(phi.mesh);
    const double p = (1.0 - cfg.beta) / 2.0;
    auto val = [&](Vec2 x) { return std::pow(std::max(interpolate(phi, loc, x), 0.0), p); };
    detail::Rng rng(99);
    int checked = 0;
    for (int it = 0; it < 200; ++it) {
        Vec2 a{rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)};
        Vec2 b{rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)};
        if (norm(a) > 0.7 || norm(b) > 0.7 || dist(a, b) < 0.3) continue;
        ++checked;
        double lhs = val(0.5 * (a + b));
        double rhs = 0.5 * (val(a) + val(b));
        REQUIRE(lhs >= rhs - 0.01 * val({0, 0}));
    }
    REQUIRE(checked > 50);
}
