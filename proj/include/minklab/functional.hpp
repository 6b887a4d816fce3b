#pragma once

#include "defaults.hpp"
#include "measure.hpp"
#include "radial.hpp"

namespace minklab {

// ---------------------------------------------------------------------------
// The energy functional F and its identities
// ---------------------------------------------------------------------------

struct EnergyReport {
    double value = 0.0;        // F = int |grad phi|^2
    double dual = 0.0;         // int phi^{1+beta}, equal to F for solutions
    double identity_gap = 0.0; // |value - dual| / value
};

inline EnergyReport energy(const ScalarField& field) {
    const Mesh& mesh = field.mesh;
    EnergyReport rep;
    std::vector<double> lump(mesh.nodes.size(), 0.0);
    for (const auto& t : mesh.triangles) {
        Vec2 p[3] = {mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]};
        double area2 = cross(p[1] - p[0], p[2] - p[0]);
        double area = 0.5 * area2;
        Vec2 g{0, 0};
        for (int k = 0; k < 3; ++k) {
            Vec2 d = p[(k + 2) % 3] - p[(k + 1) % 3];
            g += field.values[t[k]] * Vec2{-d.y, d.x} * (1.0 / area2);
        }
        rep.value += area * norm2(g);
        for (int k = 0; k < 3; ++k) lump[t[k]] += area / 3.0;
    }
    for (std::size_t i = 0; i < lump.size(); ++i)
        rep.dual += lump[i] * std::pow(std::max(field.values[i], 0.0), 1.0 + field.beta);
    rep.identity_gap = std::abs(rep.value - rep.dual) / std::max(rep.value, 1e-300);
    return rep;
}

struct HomogeneityExponents {
    double alpha = 0.0;            // F(tK) = t^alpha F(K)
    double gamma = 0.0;            // mu_{tK} = t^gamma mu_K
    double variation_factor = 0.0; // dF(K+tL)/dt = factor * int h_L dmu_K
};

inline HomogeneityExponents homogeneity_exponents(double beta, int N = 2) {
    if (!(beta >= 0.0 && beta < 1.0) || N < 1)
        throw GeometryError("need beta in [0,1) and N >= 1");
    HomogeneityExponents e;
    e.variation_factor = (1.0 + beta) / (1.0 - beta);
    e.alpha = N + 2.0 * e.variation_factor;
    e.gamma = e.alpha - 1.0;
    return e;
}

// ---------------------------------------------------------------------------
// Forward pipeline: body -> field -> flux -> measure + energy
// ---------------------------------------------------------------------------

struct ForwardResult {
    ScalarField field;
    BoundaryFlux flux;
    SurfaceMeasure mu;
    EnergyReport energy;
};

inline ForwardResult run_forward(const ConvexBody& body, const SolverConfig& cfg,
                                 int directions = tol::grid_directions) {
    ForwardResult fr;
    Mesh mesh = triangulate(body, cfg);
    fr.field = solve_sublinear(mesh, cfg);
    fr.flux = boundary_flux(fr.field, body);
    fr.mu = surface_measure(fr.flux, body, directions);
    fr.energy = energy(fr.field);
    return fr;
}

// ---------------------------------------------------------------------------
// First variation of F along a Minkowski perturbation
// ---------------------------------------------------------------------------

struct VariationReport {
    double formula = 0.0;    // factor * int h_L dmu_K
    double quotient = 0.0;   // (F(K+tL) - F(K)) / t
    double refined = 0.0;    // one-sided Richardson from t and t/2
    double rel_error = 0.0;  // |refined - formula| / |formula|
    double t_step = 0.0;
};

inline VariationReport first_variation(const ConvexBody& K, const ConvexBody& L,
                                       const SolverConfig& cfg, double t_step = 1e-3,
                                       int directions = tol::grid_directions) {
    if (!(t_step > 0.0)) throw NonpositiveScale("variation step must be positive");
    ForwardResult base = run_forward(K, cfg, directions);
    HomogeneityExponents ex = homogeneity_exponents(cfg.beta);

    std::vector<double> hl(directions);
    for (int i = 0; i < directions; ++i)
        hl[i] = support_function(L, grid_angle(i, directions));
    VariationReport rep;
    rep.t_step = t_step;
    rep.formula = ex.variation_factor * pair_measure(base.mu, hl);

    auto F_at = [&](double t) {
        ConvexBody kt = minkowski_sum(K, transform(L, t, {0, 0}));
        return energy(solve_sublinear(triangulate(kt, cfg), cfg)).value;
    };
    double F0 = base.energy.value;
    double D1 = (F_at(t_step) - F0) / t_step;
    double D2 = (F_at(0.5 * t_step) - F0) / (0.5 * t_step);
    rep.quotient = D1;
    rep.refined = 2.0 * D2 - D1;
    rep.rel_error = std::abs(rep.refined - rep.formula) / std::max(std::abs(rep.formula), 1e-300);
    return rep;
}

// ---------------------------------------------------------------------------
// Isoperimetric-type deficit
// ---------------------------------------------------------------------------
//
// Among bodies of fixed mean width the ball maximizes F, so the deficit
// (W/2)^alpha F(B_1) - F(K) is non-negative and vanishes exactly on balls.

struct IsoperimetricReport {
    double width = 0.0;      // exact uniform mean width
    double value = 0.0;      // F(K), discrete
    double bound = 0.0;      // (width/2)^alpha * F(B_1)
    double gap = 0.0;        // bound - value
    double gap_rel = 0.0;    // gap / value
};

inline IsoperimetricReport isoperimetric_gap(const ConvexBody& body, const SolverConfig& cfg) {
    IsoperimetricReport rep;
    rep.width = mean_width_exact(body);
    rep.value = energy(solve_sublinear(triangulate(body, cfg), cfg)).value;
    double alpha = homogeneity_exponents(cfg.beta).alpha;
    double disk_F = pinned::disk_energy;
    if (std::abs(cfg.beta - 0.5) > 1e-12) {
        // The pinned constant covers the default exponent; otherwise fall
        // back to the radial oracle for the reference ball energy
        // F(B_1) = int phi^{1+beta} = -2*pi*phi'(1) * ... computed directly.
        RadialSolution s = radial_oracle(1.0, 2, cfg.beta);
        double acc = 0.0;
        for (std::size_t i = 1; i < s.r.size(); ++i) {
            double rm = 0.5 * (s.r[i] + s.r[i - 1]);
            double pm = 0.5 * (s.phi[i] + s.phi[i - 1]);
            acc += std::pow(pm, 1.0 + cfg.beta) * rm * (s.r[i] - s.r[i - 1]);
        }
        disk_F = kTwoPi * acc;
    }
    rep.bound = std::pow(0.5 * rep.width, alpha) * disk_F;
    rep.gap = rep.bound - rep.value;
    rep.gap_rel = rep.gap / std::max(rep.value, 1e-300);
    return rep;
}

} // namespace minklab
