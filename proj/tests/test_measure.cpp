#include <catch2/catch_amalgamated.hpp>

#include <minklab/defaults.hpp>
#include <minklab/functional.hpp>

using namespace minklab;
using Catch::Approx;

namespace {

SolverConfig cfg_with_h(double h) {
    SolverConfig cfg;
    cfg.mesh_h = h;
    return cfg;
}

} // namespace

TEST_CASE("torsion flux on the disk is uniform -R/2", "[measure]") {
    ConvexBody disk = disk_body();
    SolverConfig cfg = cfg_with_h(0.02);
    Mesh mesh = triangulate(disk, cfg);
    ScalarField torsion = solve_torsion(mesh, cfg);
    BoundaryFlux flux = boundary_flux(torsion, disk);

    for (const auto& s : flux.segments)
        REQUIRE(s.q == Approx(-0.5).epsilon(0.01));
    REQUIRE(flux.load_integral == Approx(mesh_area(mesh)).epsilon(1e-12));
    REQUIRE(flux.divergence_gap <= 1e-6);
}

TEST_CASE("sub-linear flux on the disk matches the pinned slope", "[measure]") {
    ConvexBody disk = disk_body();
    SolverConfig cfg = cfg_with_h(0.03);
    ScalarField phi = solve_sublinear(triangulate(disk, cfg), cfg);
    BoundaryFlux flux = boundary_flux(phi, disk);

    for (const auto& s : flux.segments)
        REQUIRE(s.q == Approx(pinned::disk_boundary_slope).epsilon(0.02));
    // Divergence identity: int phi^beta = -total boundary flux; and on the
    // ball the exact value is 2 pi |phi'(1)|.
    REQUIRE(flux.divergence_gap <= 1e-8);
    REQUIRE(flux.load_integral ==
            Approx(kTwoPi * -pinned::disk_boundary_slope).epsilon(0.01));
}

TEST_CASE("disk surface measure is nearly uniform with the right mass", "[measure]") {
    // Phase-align the polygon so each edge normal sits exactly on a grid
    // direction; the default phase puts normals on bin boundaries where the
    // snap is an arbitrary tie.
    ConvexBody disk = regular_polygon(256, 1.0, kPi / 256);
    SolverConfig cfg = cfg_with_h(0.03);
    ForwardResult fr = run_forward(disk, cfg, 256);

    double lo = 1e300, hi = 0.0;
    for (double w : fr.mu.weights) {
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    REQUIRE(lo > 0.0);
    REQUIRE((hi - lo) / (fr.mu.mass() / 256) <= 0.05);
    double slope = pinned::disk_boundary_slope;
    REQUIRE(fr.mu.mass() == Approx(kTwoPi * slope * slope).epsilon(0.02));
    REQUIRE(norm(measure_centroid(fr.mu)) <= tol::centroid_norm);
}

TEST_CASE("square surface measure concentrates on four directions", "[measure]") {
    ConvexBody sq = square_body(1.0);
    SolverConfig cfg = cfg_with_h(0.05);
    ForwardResult fr = run_forward(sq, cfg, 4);

    REQUIRE(fr.mu.directions == 4);
    double mean = fr.mu.mass() / 4.0;
    for (double w : fr.mu.weights) REQUIRE(w == Approx(mean).epsilon(0.03));
    REQUIRE(norm(measure_centroid(fr.mu)) <= tol::centroid_norm);

    // On a finer grid the mass sits in the same four atoms.
    SurfaceMeasure mu256 = surface_measure(fr.flux, sq, 256);
    double off = 0.0;
    for (int i = 0; i < 256; ++i)
        if (i % 64 != 0) off += mu256.weights[i];
    REQUIRE(off == 0.0);
}

TEST_CASE("measure scales with exponent seven under doubling", "[measure]") {
    ConvexBody k = random_convex_body(37);
    ConvexBody k2 = transform(k, 2.0, {0, 0});
    ForwardResult a = run_forward(k, cfg_with_h(0.06), 64);
    ForwardResult b = run_forward(k2, cfg_with_h(0.12), 64);
    REQUIRE(b.mu.mass() == Approx(128.0 * a.mu.mass()).epsilon(1e-6));
    for (int i = 0; i < 64; ++i) {
        if (a.mu.weights[i] == 0.0) REQUIRE(b.mu.weights[i] == 0.0);
        else REQUIRE(b.mu.weights[i] == Approx(128.0 * a.mu.weights[i]).epsilon(1e-6));
    }
}

TEST_CASE("measure centroid of synthetic measures", "[measure]") {
    SurfaceMeasure atom = make_measure(8, {1, 0, 0, 0, 0, 0, 0, 0});
    Vec2 c = measure_centroid(atom);
    REQUIRE(c.x == Approx(1.0));
    REQUIRE(c.y == Approx(0.0).margin(1e-15));

    SurfaceMeasure pair_m = make_measure(8, {1, 0, 0, 0, 1, 0, 0, 0});
    REQUIRE(norm(measure_centroid(pair_m)) == Approx(0.0).margin(1e-15));

    SurfaceMeasure zero = make_measure(4, {0, 0, 0, 0});
    REQUIRE_THROWS_AS(measure_centroid(zero), ZeroMassMeasure);
}

TEST_CASE("pairing against grid samples and callables agree", "[measure]") {
    SurfaceMeasure mu = make_measure(16, std::vector<double>(16, 0.25));
    REQUIRE(pair_measure(mu, [](double) { return 1.0; }) == Approx(4.0));
    std::vector<double> ones(16, 1.0);
    REQUIRE(pair_measure(mu, ones) == Approx(4.0));
    std::vector<double> cosines(16);
    for (int i = 0; i < 16; ++i) cosines[i] = std::cos(grid_angle(i, 16));
    REQUIRE(pair_measure(mu, cosines) == Approx(0.0).margin(1e-12));
    REQUIRE_THROWS_AS(pair_measure(mu, std::vector<double>(8, 1.0)), GridMismatch);
}

TEST_CASE("make_measure validates weights", "[measure]") {
    REQUIRE_THROWS_AS(make_measure(4, {1, 2, 3}), GeometryError);
    REQUIRE_THROWS_AS(make_measure(3, {1, -0.5, 3}), GeometryError);
    REQUIRE_THROWS_AS(make_measure(3, {1, std::nan(""), 3}), GeometryError);
}

TEST_CASE("snap error is bounded by half the grid step", "[measure]") {
    // Vertices on the grid put edge normals exactly between grid directions.
    ConvexBody worst = regular_polygon(256, 1.0);
    REQUIRE(max_snap_error(worst, 256) == Approx(kPi / 256).epsilon(1e-9));
    // Phase shifting by half a step aligns the normals with the grid.
    ConvexBody aligned = regular_polygon(256, 1.0, kPi / 256);
    REQUIRE(max_snap_error(aligned, 256) <= 1e-9);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        REQUIRE(max_snap_error(random_convex_body(seed), 64) <= kPi / 64 * (1 + 1e-12));
    }
}
