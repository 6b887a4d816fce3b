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

TEST_CASE("disk energy matches the pinned oracle value", "[functional]") {
    SolverConfig cfg = cfg_with_h(0.03);
    ScalarField phi = solve_sublinear(triangulate(disk_body(), cfg), cfg);
    EnergyReport rep = energy(phi);
    REQUIRE(rep.value == Approx(pinned::disk_energy).epsilon(0.01));
    REQUIRE(rep.identity_gap <= 0.01);
}

TEST_CASE("energy identity holds on assorted bodies", "[functional]") {
    SolverConfig cfg = cfg_with_h(0.05);
    for (std::uint64_t seed : {51u, 52u, 53u}) {
        ScalarField phi =
            solve_sublinear(triangulate(random_convex_body(seed), cfg), cfg);
        REQUIRE(energy(phi).identity_gap <= 0.01);
    }
    ScalarField sq = solve_sublinear(triangulate(square_body(1.0), cfg), cfg);
    REQUIRE(energy(sq).identity_gap <= 0.01);
}

TEST_CASE("homogeneity exponents", "[functional]") {
    HomogeneityExponents e = homogeneity_exponents(0.5);
    REQUIRE(e.alpha == Approx(8.0));
    REQUIRE(e.gamma == Approx(7.0));
    REQUIRE(e.variation_factor == Approx(3.0));

    // The torsion limit: alpha -> N + 2, factor -> 1.
    HomogeneityExponents t = homogeneity_exponents(0.0, 3);
    REQUIRE(t.alpha == Approx(5.0));
    REQUIRE(t.variation_factor == Approx(1.0));

    detail::Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        double beta = rng.uniform(0.01, 0.99);
        HomogeneityExponents r = homogeneity_exponents(beta);
        REQUIRE(r.gamma == Approx(r.alpha - 1.0).margin(1e-12));
        REQUIRE(r.alpha == Approx(2.0 + 2.0 * (1.0 + beta) / (1.0 - beta)).margin(1e-12));
    }
    REQUIRE_THROWS_AS(homogeneity_exponents(1.0), GeometryError);
    REQUIRE_THROWS_AS(homogeneity_exponents(-0.1), GeometryError);
}

TEST_CASE("energy scales with exponent eight under doubling", "[functional]") {
    ConvexBody k = random_convex_body(61);
    ConvexBody k2 = transform(k, 2.0, {0, 0});
    double f1 = energy(solve_sublinear(triangulate(k, cfg_with_h(0.06)), cfg_with_h(0.06))).value;
    double f2 =
        energy(solve_sublinear(triangulate(k2, cfg_with_h(0.12)), cfg_with_h(0.12))).value;
    REQUIRE(f2 == Approx(256.0 * f1).epsilon(1e-6));
}

TEST_CASE("energy is translation invariant up to discretization", "[functional]") {
    ConvexBody k = random_convex_body(62);
    SolverConfig cfg = cfg_with_h(0.05);
    double f0 = energy(solve_sublinear(triangulate(k, cfg), cfg)).value;
    double f1 = energy(
        solve_sublinear(triangulate(translate(k, {0.37, -0.81}), cfg), cfg)).value;
    REQUIRE(f1 == Approx(f0).epsilon(0.01));
}

TEST_CASE("exact mean width agrees with closed forms and quadrature", "[functional]") {
    REQUIRE(mean_width_exact(square_body(1.0)) == Approx(8.0 / kPi).epsilon(1e-12));
    REQUIRE(mean_width_exact(disk_body()) ==
            Approx(2.0 * 256.0 * std::sin(kPi / 256) / kPi).epsilon(1e-12));

    ConvexBody k = random_convex_body(63);
    const int n = 200000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += support_function(k, grid_angle(i, n));
    REQUIRE(mean_width_exact(k) == Approx(acc * kTwoPi / n / kPi).margin(1e-6));

    ConvexBody a = random_convex_body(64), b = random_convex_body(65);
    REQUIRE(mean_width_exact(minkowski_sum(a, b)) ==
            Approx(mean_width_exact(a) + mean_width_exact(b)).epsilon(1e-10));

    // And it agrees with the sampled mean width on a fine grid.
    REQUIRE(mean_width(k, uniform_measure(4096)) ==
            Approx(mean_width_exact(k)).epsilon(1e-6));
}

TEST_CASE("first variation matches the measure pairing", "[functional]") {
    SolverConfig cfg = cfg_with_h(0.05);
    VariationReport rep =
        first_variation(square_body(1.0), disk_body(1.0, 64), cfg, 2e-3, 128);
    REQUIRE(rep.rel_error <= 0.05);
    REQUIRE(rep.formula > 0.0); // growing the body increases F
}

TEST_CASE("Euler identity links the measure to the energy", "[functional]") {
    // F(K + tK) = (1+t)^alpha F(K), so gamma-degree homogeneity forces
    // factor * int h_K dmu_K = alpha * F(K).
    SolverConfig cfg = cfg_with_h(0.04);
    ConvexBody k = square_body(1.0);
    ForwardResult fr = run_forward(k, cfg, 256);
    std::vector<double> hk(256);
    for (int i = 0; i < 256; ++i) hk[i] = support_function(k, grid_angle(i, 256));
    double lhs = pinned::variation_factor * pair_measure(fr.mu, hk);
    double rhs = pinned::alpha * fr.energy.value;
    REQUIRE(lhs == Approx(rhs).epsilon(0.03));
}

TEST_CASE("isoperimetric deficit vanishes on the disk and not on the square", "[functional]") {
    IsoperimetricReport disk = isoperimetric_gap(disk_body(), cfg_with_h(0.03));
    REQUIRE(std::abs(disk.gap_rel) <= 0.015);

    IsoperimetricReport sq = isoperimetric_gap(square_body(1.0), cfg_with_h(0.05));
    REQUIRE(sq.gap > 0.0);
    REQUIRE(sq.gap_rel > 0.05); // the square is genuinely off-optimal

    for (std::uint64_t seed : {71u, 72u, 73u}) {
        IsoperimetricReport r =
            isoperimetric_gap(random_convex_body(seed), cfg_with_h(0.06));
        REQUIRE(r.gap_rel >= -tol::iso_gap_rel);
    }
}
