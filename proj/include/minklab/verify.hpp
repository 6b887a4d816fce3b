#pragma once

#include "io.hpp"

#include <chrono>
#include <functional>

namespace minklab {

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------
//
// Each suite checks one contract of the pipeline against the pinned
// tolerances in defaults.hpp and returns a structured report. The suites are
// parameter free on purpose: they are the acceptance gate, and the gate does
// not move. Reports are deterministic except for the elapsed time.

struct Check {
    std::string name;
    bool pass = false;
    double value = 0.0;     // measured quantity
    double tolerance = 0.0; // gate it was held against
    std::string detail;
};

struct Report {
    std::string scenario;
    std::vector<Check> checks;
    double elapsed_seconds = 0.0;
    bool pass() const {
        for (const Check& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct UnknownSuite final : Error {
    explicit UnknownSuite(const std::string& w) : Error(ErrorKind::invalid_input, w) {}
};

namespace detail {

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

/// Gate |value| <= tolerance.
inline Check gate_abs(std::string name, double value, double tolerance,
                      std::string detail = {}) {
    return Check{std::move(name), std::abs(value) <= tolerance, value, tolerance,
                 std::move(detail)};
}

/// Gate value >= -tolerance (one-sided sign checks with a noise allowance).
inline Check gate_above(std::string name, double value, double tolerance,
                        std::string detail = {}) {
    return Check{std::move(name), value >= -tolerance, value, tolerance,
                 std::move(detail)};
}

inline Check gate_flag(std::string name, bool pass, std::string detail = {}) {
    return Check{std::move(name), pass, pass ? 1.0 : 0.0, 1.0, std::move(detail)};
}

inline SolverConfig config_with_h(double h) {
    SolverConfig cfg;
    cfg.mesh_h = h;
    return cfg;
}

inline double rel_gap(double value, double target) {
    return (value - target) / target;
}

} // namespace detail

/// Unit disk against the one dimensional profile: field values, flux level,
/// flux uniformity, and the wall-clock budget.
inline Report verify_disk() {
    detail::Stopwatch clock;
    Report rep{"disk", {}, 0.0};
    SolverConfig cfg = detail::config_with_h(tol::mesh_h);
    ConvexBody disk = disk_body();
    ScalarField field = solve_sublinear(triangulate(disk, cfg), cfg);
    RadialSolution oracle = radial_oracle(1.0, 2, cfg.beta);

    PointLocator locator(field.mesh);
    double center = interpolate(field, locator, {0.0, 0.0});
    rep.checks.push_back(detail::gate_abs(
        "center value matches the radial profile",
        detail::rel_gap(center, pinned::disk_center_value), tol::disk_oracle_rel));

    double sup_err = 0.0, sup = 0.0;
    for (std::size_t i = 0; i < field.mesh.nodes.size(); ++i) {
        double r = norm(field.mesh.nodes[i]);
        if (r <= 1.0)
            sup_err = std::max(sup_err,
                               std::abs(field.values[i] - radial_value(oracle, r)));
        sup = std::max(sup, field.values[i]);
    }
    rep.checks.push_back(detail::gate_abs("sup error against the radial profile",
                                          sup_err / sup, tol::disk_oracle_rel));

    BoundaryFlux flux = boundary_flux(field, disk);
    double qlo = 1e300, qhi = -1e300, qmean = 0.0, arc = 0.0;
    for (const SegmentFlux& s : flux.segments) {
        qlo = std::min(qlo, s.q);
        qhi = std::max(qhi, s.q);
        qmean += s.q * s.length;
        arc += s.length;
    }
    qmean /= arc;
    rep.checks.push_back(detail::gate_abs("boundary flux is uniform",
                                          (qhi - qlo) / std::abs(qmean),
                                          tol::flux_uniform_rel));
    rep.checks.push_back(detail::gate_abs(
        "flux level matches the boundary slope",
        detail::rel_gap(qmean, pinned::disk_boundary_slope), tol::flux_uniform_rel));

    rep.elapsed_seconds = clock.seconds();
    rep.checks.push_back(detail::gate_abs("within the time budget",
                                          rep.elapsed_seconds, 60.0));
    return rep;
}

/// Integration by parts: the gradient energy equals the lumped potential
/// integral for every solved body.
inline Report verify_identity() {
    detail::Stopwatch clock;
    Report rep{"identity", {}, 0.0};
    SolverConfig cfg = detail::config_with_h(0.04);
    auto check_body = [&](const std::string& label, const ConvexBody& body) {
        EnergyReport er = energy(solve_sublinear(triangulate(body, cfg), cfg));
        rep.checks.push_back(detail::gate_abs("identity on " + label,
                                              er.identity_gap,
                                              tol::energy_identity_rel));
    };
    check_body("disk", disk_body());
    check_body("square", square_body(1.0));
    for (unsigned seed = 1; seed <= 20; ++seed)
        check_body("random " + std::to_string(seed), random_convex_body(seed));
    rep.elapsed_seconds = clock.seconds();
    return rep;
}

/// Doubling the body at a fixed mesh size: energy by 2^8, measure mass by
/// 2^7, field peak by 2^4.
inline Report verify_scaling() {
    detail::Stopwatch clock;
    Report rep{"scaling", {}, 0.0};
    SolverConfig cfg = detail::config_with_h(0.03);
    auto check_body = [&](const std::string& label, const ConvexBody& body) {
        ForwardResult base = run_forward(body, cfg, 64);
        ForwardResult twice = run_forward(transform(body, 2.0, {0, 0}), cfg, 64);
        double sup1 = 0.0, sup2 = 0.0;
        for (double v : base.field.values) sup1 = std::max(sup1, v);
        for (double v : twice.field.values) sup2 = std::max(sup2, v);
        rep.checks.push_back(detail::gate_abs(
            "energy ratio on " + label,
            detail::rel_gap(twice.energy.value / base.energy.value, 256.0),
            tol::scaling_rel));
        rep.checks.push_back(detail::gate_abs(
            "measure mass ratio on " + label,
            detail::rel_gap(twice.mu.mass() / base.mu.mass(), 128.0),
            tol::scaling_rel));
        rep.checks.push_back(detail::gate_abs(
            "field peak ratio on " + label, detail::rel_gap(sup2 / sup1, 16.0),
            tol::scaling_rel));
    };
    check_body("square", square_body(0.7));
    check_body("random 3", random_convex_body(3));
    rep.elapsed_seconds = clock.seconds();
    return rep;
}

/// Fifty nested pairs: the field of the smaller body never exceeds the field
/// of the larger one beyond the slack.
inline Report verify_comparison() {
    detail::Stopwatch clock;
    Report rep{"comparison", {}, 0.0};
    SolverConfig cfg = detail::config_with_h(0.05);
    for (unsigned seed = 1; seed <= 50; ++seed) {
        ConvexBody outer = random_convex_body(seed);
        detail::Rng rng(seed * 977u + 13u);
        double s = 0.3 + 0.6 * rng.uniform();
        Vec2 c = steiner_point(outer);
        ConvexBody inner = transform(outer, s, {(1.0 - s) * c.x, (1.0 - s) * c.y});

        ScalarField fo = solve_sublinear(triangulate(outer, cfg), cfg);
        ScalarField fi = solve_sublinear(triangulate(inner, cfg), cfg);
        PointLocator locator(fo.mesh);
        double sup = 0.0;
        for (double v : fo.values) sup = std::max(sup, v);
        double worst = -1e300;
        for (std::size_t i = 0; i < fi.mesh.nodes.size(); ++i) {
            double up = fi.values[i] - interpolate(fo, locator, fi.mesh.nodes[i]);
            worst = std::max(worst, up / sup);
        }
        Check c1 = detail::gate_abs("pair " + std::to_string(seed) + " stays below",
                                    worst, tol::comparison_slack);
        c1.pass = worst <= tol::comparison_slack; // one sided: deficits are fine
        rep.checks.push_back(c1);
    }
    rep.elapsed_seconds = clock.seconds();
    return rep;
}

/// Energy of inscribed regular polygons grows with the vertex count and
/// lands within one percent of the disk value.
inline Report verify_continuity() {
    detail::Stopwatch clock;
    Report rep{"continuity", {}, 0.0};
    SolverConfig cfg = detail::config_with_h(tol::mesh_h);
    std::vector<int> ns{8, 16, 32, 64, 128};
    std::vector<double> F;
    for (int n : ns) {
        ConvexBody poly = regular_polygon(n, 1.0);
        F.push_back(energy(solve_sublinear(triangulate(poly, cfg), cfg)).value);
    }
    for (std::size_t k = 1; k < F.size(); ++k)
        rep.checks.push_back(detail::gate_flag(
            "energy grows from " + std::to_string(ns[k - 1]) + " to " +
                std::to_string(ns[k]) + " vertices",
            F[k] > F[k - 1]));
    rep.checks.push_back(detail::gate_abs(
        "polygon energies approach the disk value",
        detail::rel_gap(F.back(), pinned::disk_energy), tol::continuity_rel));
    rep.elapsed_seconds = clock.seconds();
    return rep;
}

/// Weak convergence of the measure along a body sequence: inscribed regular
/// polygons approach the disk in Hausdorff distance, so their pairings with
/// low trigonometric modes approach the disk pairings. Gaps must shrink at
/// every doubling unless they already sit in the quadrature noise floor.
inline Report verify_weak() {
    detail::Stopwatch clock;
    Report rep{"weak", {}, 0.0};
    SolverConfig cfg = detail::config_with_h(tol::mesh_h);
    const std::vector<int> ns{8, 16, 32, 64, 128};
    const char* names[5] = {"constant", "cos", "sin", "cos2", "sin2"};
    auto mode = [](int m) {
        return [m](double th) {
            switch (m) {
                case 0: return 1.0;
                case 1: return std::cos(th);
                case 2: return std::sin(th);
                case 3: return std::cos(2.0 * th);
                default: return std::sin(2.0 * th);
            }
        };
    };
    SurfaceMeasure ref = run_forward(disk_body(), cfg, 256).mu;
    double mass = ref.mass();
    double refp[5];
    for (int m = 0; m < 5; ++m) refp[m] = pair_measure(ref, mode(m));

    std::vector<std::array<double, 5>> gaps;
    for (int n : ns) {
        SurfaceMeasure mu = run_forward(regular_polygon(n, 1.0), cfg, 256).mu;
        std::array<double, 5> g;
        for (int m = 0; m < 5; ++m) g[m] = std::abs(pair_measure(mu, mode(m)) - refp[m]);
        gaps.push_back(g);
    }
    for (int m = 0; m < 5; ++m) {
        bool ok = true;
        for (std::size_t k = 1; k < gaps.size(); ++k)
            ok = ok && (gaps[k][m] <= tol::weak_growth_slack * gaps[k - 1][m] ||
                        gaps[k][m] <= tol::weak_noise_floor * mass);
        rep.checks.push_back(Check{std::string("pairing with ") + names[m] +
                                       " converges along the polygons",
                                   ok, gaps.back()[m] / mass, tol::weak_noise_floor,
                                   {}});
    }
    rep.checks.push_back(detail::gate_abs("finest polygon pairing lands on the disk",
                                          gaps.back()[0] / mass, 0.01));
    rep.elapsed_seconds = clock.seconds();
    return rep;
}

/// Directional derivative of the energy against the measure pairing formula,
/// plus the integral identity tying the pairing of a body with its own
/// measure back to its energy.
inline Report verify_variation() {
    detail::Stopwatch clock;
    Report rep{"variation", {}, 0.0};
    SolverConfig cfg = detail::config_with_h(tol::mesh_h);
    auto check_pair = [&](const std::string& label, const ConvexBody& K,
                          const ConvexBody& L) {
        VariationReport v = first_variation(K, L, cfg, 1e-3, 128);
        rep.checks.push_back(detail::gate_abs("variation for " + label, v.rel_error,
                                              tol::variation_rel));
    };
    check_pair("square with disk", square_body(1.0), disk_body(1.0, 64));
    check_pair("random 7 with random 8", recenter(random_convex_body(7)).body,
               recenter(random_convex_body(8)).body);

    auto check_euler = [&](const std::string& label, const ConvexBody& K) {
        ForwardResult fwd = run_forward(K, cfg, 256);
        SupportVector sv = sample_support(K, 256);
        double lhs = homogeneity_exponents(cfg.beta).variation_factor *
                     pair_measure(fwd.mu, sv.values);
        double rhs = homogeneity_exponents(cfg.beta).alpha * fwd.energy.value;
        rep.checks.push_back(detail::gate_abs("euler identity on " + label,
                                              (lhs - rhs) / rhs, tol::euler_rel));
    };
    check_euler("square", square_body(1.0));
    check_euler("random 9", recenter(random_convex_body(9)).body);
    rep.elapsed_seconds = clock.seconds();
    return rep;
}

/// Inverse problem round trips: a square reproduces itself from its own
/// measure, and the uniform measure of the unit ball returns a ball.
inline Report verify_roundtrip() {
    detail::Stopwatch clock;
    Report rep{"roundtrip", {}, 0.0};
    const int M = 64;

    ConvexBody square = square_body(1.0);
    ForwardResult fwd = run_forward(square, detail::config_with_h(tol::mesh_h), M);
    MinkowskiConfig cfg;
    cfg.pde.mesh_h = 0.03;
    MinkowskiResult sq = solve_minkowski(fwd.mu, cfg);
    rep.checks.push_back(detail::gate_abs("square reproduces itself",
                                          hausdorff_distance(sq.body, square),
                                          tol::roundtrip_hausdorff));
    rep.checks.push_back(detail::gate_abs("square gauge is fixed",
                                          norm(steiner_point(sq.body)),
                                          tol::steiner_gauge));

    SurfaceMeasure uniform = uniform_measure(M);
    double mass = kTwoPi * pinned::disk_boundary_slope * pinned::disk_boundary_slope;
    for (double& w : uniform.weights) w *= mass / kTwoPi;
    MinkowskiResult ball = solve_minkowski(uniform, cfg);
    double lo = 1e300, hi = 0.0, mean = 0.0;
    for (int i = 0; i < M; ++i) {
        double h = support_function(ball.body, grid_angle(i, M));
        lo = std::min(lo, h);
        hi = std::max(hi, h);
        mean += h / M;
    }
    rep.checks.push_back(detail::gate_abs("uniform target returns a ball",
                                          (hi - lo) / mean,
                                          tol::roundtrip_spread_rel));
    rep.checks.push_back(detail::gate_abs("recovered ball has unit size",
                                          detail::rel_gap(mean, 1.0), 0.02));
    rep.checks.push_back(detail::gate_abs("ball gauge is fixed",
                                          norm(steiner_point(ball.body)),
                                          tol::steiner_gauge));

    rep.elapsed_seconds = clock.seconds();
    rep.checks.push_back(detail::gate_abs("within the time budget",
                                          rep.elapsed_seconds, 900.0));
    return rep;
}

/// The ball maximizes energy at fixed mean width: the deficit vanishes on
/// the disk and stays nonnegative elsewhere.
inline Report verify_iso() {
    detail::Stopwatch clock;
    Report rep{"iso", {}, 0.0};
    IsoperimetricReport disk =
        isoperimetric_gap(disk_body(), detail::config_with_h(tol::mesh_h));
    rep.checks.push_back(detail::gate_abs("deficit vanishes on the disk",
                                          disk.gap_rel, tol::iso_gap_rel));

    SolverConfig cfg = detail::config_with_h(0.05);
    IsoperimetricReport square = isoperimetric_gap(square_body(1.0), cfg);
    rep.checks.push_back(detail::gate_flag("square sits strictly below the bound",
                                           square.gap_rel > 0.05));

    double worst = 1e300;
    for (unsigned seed = 1; seed <= 100; ++seed) {
        IsoperimetricReport r = isoperimetric_gap(random_convex_body(seed), cfg);
        worst = std::min(worst, r.gap_rel);
    }
    rep.checks.push_back(detail::gate_above("deficit is nonnegative on random bodies",
                                            worst, tol::iso_gap_rel));
    rep.elapsed_seconds = clock.seconds();
    return rep;
}

/// Solvability conditions on the data side: measures of bodies close up, and
/// the inverse solver rejects measures no body can produce.
inline Report verify_closure() {
    detail::Stopwatch clock;
    Report rep{"closure", {}, 0.0};
    SolverConfig cfg = detail::config_with_h(0.04);
    auto check_body = [&](const std::string& label, const ConvexBody& body) {
        SurfaceMeasure mu = run_forward(body, cfg, 256).mu;
        rep.checks.push_back(detail::gate_abs("centroid closes on " + label,
                                              norm(measure_centroid(mu)),
                                              tol::centroid_norm));
    };
    check_body("disk", disk_body());
    check_body("square", square_body(1.0));
    for (unsigned seed = 1; seed <= 5; ++seed)
        check_body("random " + std::to_string(seed), random_convex_body(seed));

    auto expect = [&](const std::string& name, const SurfaceMeasure& mu,
                      ErrorKind kind, const char* what) {
        bool ok = false;
        try {
            validate_target(mu);
        } catch (const Error& e) {
            ok = e.kind() == kind && std::string(e.what()).find(what) != std::string::npos;
        }
        rep.checks.push_back(detail::gate_flag(name, ok));
    };
    std::vector<double> atom(16, 0.0);
    atom[3] = 1.0;
    expect("single atom is rejected", make_measure(16, atom),
           ErrorKind::invalid_input, "centroid");
    std::vector<double> antipodal(16, 0.0);
    antipodal[2] = 1.0;
    antipodal[10] = 1.0;
    expect("antipodal pair is rejected", make_measure(16, antipodal),
           ErrorKind::invalid_input, "single direction");
    expect("empty measure is rejected", make_measure(8, std::vector<double>(8, 0.0)),
           ErrorKind::invalid_input, "mass");
    rep.elapsed_seconds = clock.seconds();
    return rep;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{
        "disk",      "identity", "scaling",   "comparison", "continuity",
        "weak",      "variation", "roundtrip", "iso",        "closure"};
    return names;
}

inline Report run_suite(const std::string& name) {
    if (name == "disk") return verify_disk();
    if (name == "identity") return verify_identity();
    if (name == "scaling") return verify_scaling();
    if (name == "comparison") return verify_comparison();
    if (name == "continuity") return verify_continuity();
    if (name == "weak") return verify_weak();
    if (name == "variation") return verify_variation();
    if (name == "roundtrip") return verify_roundtrip();
    if (name == "iso") return verify_iso();
    if (name == "closure") return verify_closure();
    throw UnknownSuite("no verification suite named '" + name + "'");
}

inline std::vector<Report> verify_all() {
    std::vector<Report> reports;
    for (const std::string& name : suite_names()) reports.push_back(run_suite(name));
    return reports;
}

/// Pinned reference constants stamped into every report so a reader can tell
/// which calibration the checks were gated against.
inline nlohmann::json pinned_json() {
    nlohmann::json p;
    p["beta"] = 0.5;
    p["disk_center_value"] = pinned::disk_center_value;
    p["disk_boundary_slope"] = pinned::disk_boundary_slope;
    p["disk_energy"] = pinned::disk_energy;
    return p;
}

inline nlohmann::json report_json(const Report& rep) {
    nlohmann::json j;
    j["scenario"] = rep.scenario;
    j["pass"] = rep.pass();
    j["elapsed_seconds"] = rep.elapsed_seconds;
    j["pinned"] = pinned_json();
    j["checks"] = nlohmann::json::array();
    for (const Check& c : rep.checks) {
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        cj["value"] = c.value;
        cj["tolerance"] = c.tolerance;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        j["checks"].push_back(cj);
    }
    return j;
}

inline void save_reports(const std::vector<Report>& reports, const std::string& path) {
    nlohmann::json j;
    j["reports"] = nlohmann::json::array();
    bool all = true;
    for (const Report& r : reports) {
        j["reports"].push_back(report_json(r));
        all = all && r.pass();
    }
    j["pass"] = all;
    detail::write_text(path, j.dump(2) + "\n");
}

} // namespace minklab
