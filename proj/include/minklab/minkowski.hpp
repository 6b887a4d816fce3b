#pragma once

#include "functional.hpp"

namespace minklab {

// ---------------------------------------------------------------------------
// Inverse problem: recover K from a prescribed surface measure
// ---------------------------------------------------------------------------
//
// Maximize F(K) over convex bodies with mu-mean-width W_mu(K) = 1. At an
// interior maximizer the first variation forces mu_K = lambda * mu, and the
// gamma-homogeneity of the measure turns the multiplier into a dilation:
// t = lambda^{-1/gamma} gives mu_{tK} = mu. The search runs on support
// vectors over the direction grid with projected gradient ascent; every step
// is convexified (clip, resample), recentred at the Steiner point, and
// renormalized to the constraint surface.

struct MinkowskiConfig {
    SolverConfig pde{0.5, 0.04, 1e-8, 200, 1e-10};
    int max_outer = 200;     // accepted ascent steps
    double step0 = 0.15;     // initial step along the projected gradient
    double step_min = 1e-5;  // line search floor
    double tol = 1.5e-3;     // relative l1 proportionality residual
};

struct MinkowskiResult {
    ConvexBody body;        // recovered body, Steiner point at the origin
    double lambda = 0.0;    // mu_{K*} = lambda * mu at the normalized maximizer
    double rescale_t = 0.0; // lambda^{-1/gamma}; body is already rescaled by it
    double residual = 0.0;  // relative l1 gap between mu_body and the target
    int iterations = 0;
    std::vector<double> trace_F;        // constrained functional, accepted steps
    std::vector<double> trace_residual; // proportionality residual per step
};

/// Relative l1 distance between two measures on the same grid, normalized by
/// the mass of b.
inline double measure_residual(const SurfaceMeasure& a, const SurfaceMeasure& b) {
    if (a.directions != b.directions)
        throw GridMismatch("measures live on different grids");
    double num = 0.0;
    for (int i = 0; i < a.directions; ++i) num += std::abs(a.weights[i] - b.weights[i]);
    double m = b.mass();
    if (!(m > 0.0)) throw ZeroMassMeasure("residual against a zero measure");
    return num / m;
}

/// Reject targets that cannot be surface measures of a body: zero mass, a
/// centroid away from the origin (the measure of any body integrates the
/// normal to zero), or mass concentrated on one line of directions.
inline void validate_target(const SurfaceMeasure& mu) {
    double m = mu.mass();
    if (!(m > 0.0)) throw ZeroMassMeasure("target measure has no mass");
    if (norm(measure_centroid(mu)) > tol::centroid_norm)
        throw CentroidViolation("target centroid exceeds the closure tolerance");
    const int M = mu.directions;
    double worst = 1e300;
    for (int j = 0; j < 2 * M; ++j) {
        double theta = kPi * j / M;
        Vec2 t = unit_vector(theta);
        double acc = 0.0;
        for (int i = 0; i < M; ++i)
            acc += mu.weights[i] * std::abs(dot(t, unit_vector(grid_angle(i, M))));
        worst = std::min(worst, acc / m);
    }
    if (worst <= 1e-9)
        throw DegenerateMeasure("target mass is carried by a single direction pair");
}

namespace detail {

struct Iterate {
    ConvexBody body;
    ForwardResult fwd;
    double F = 0.0;
};

inline double mu_mean_width(const ConvexBody& body, const SurfaceMeasure& mu,
                            const std::vector<double>& h) {
    double acc = 0.0;
    for (int i = 0; i < mu.directions; ++i) acc += mu.weights[i] * h[i];
    return 2.0 * acc / mu.mass();
}

/// Intersect only the half-planes of directions carrying target mass. The
/// maximizer has no facet elsewhere, and by the comparison principle any
/// extra clipping can only lower the functional. Unsupported directions get
/// a placeholder above the roof, grown until none of them binds.
inline ConvexBody restricted_hull(const std::vector<double>& h, const SurfaceMeasure& mu) {
    const int M = mu.directions;
    double hmax = 0.0;
    bool full = true;
    for (int i = 0; i < M; ++i) {
        if (mu.weights[i] > 0.0) hmax = std::max(hmax, std::abs(h[i]));
        else full = false;
    }
    SupportVector sv{M, h};
    if (full) return body_from_support(sv);
    double huge = 8.0 * std::max(hmax, 1e-30);
    for (int attempt = 0; attempt < 20; ++attempt) {
        for (int i = 0; i < M; ++i)
            if (!(mu.weights[i] > 0.0)) sv.values[i] = huge;
        ConvexBody body = body_from_support(sv);
        bool binds = false;
        for (int i = 0; i < M && !binds; ++i)
            if (!(mu.weights[i] > 0.0))
                binds = support_function(body, grid_angle(i, M)) > 0.45 * huge;
        if (!binds) return body;
        huge *= 4.0;
    }
    throw CollapseDetected("support roof of the target directions is unbounded");
}

/// Convexify a support vector, recenter, and scale onto W_mu = 1.
inline ConvexBody project_to_constraint(const SupportVector& sv, const SurfaceMeasure& mu) {
    ConvexBody body = recenter(restricted_hull(sv.values, mu)).body;
    std::vector<double> h(mu.directions);
    for (int i = 0; i < mu.directions; ++i)
        h[i] = support_function(body, grid_angle(i, mu.directions));
    double w = mu_mean_width(body, mu, h);
    if (!(w > 1e-12)) throw CollapseDetected("iterate lost its mu-mean width");
    return transform(body, 1.0 / w, {0, 0});
}

} // namespace detail

inline MinkowskiResult solve_minkowski(const SurfaceMeasure& mu, const MinkowskiConfig& cfg) {
    validate_target(mu);
    validate(cfg.pde);
    const int M = mu.directions;
    const double mass = mu.mass();
    const double gamma = homogeneity_exponents(cfg.pde.beta).gamma;
    const double factor = homogeneity_exponents(cfg.pde.beta).variation_factor;

    auto evaluate = [&](const ConvexBody& body) {
        detail::Iterate it;
        it.body = body;
        it.fwd = run_forward(body, cfg.pde, M);
        it.F = it.fwd.energy.value;
        return it;
    };
    auto lambda_of = [&](const SurfaceMeasure& mu_k) {
        double num = 0.0;
        for (int i = 0; i < M; ++i)
            if (mu.weights[i] > 0.0) num += mu_k.weights[i];
        return num / mass;
    };
    auto residual_of = [&](const SurfaceMeasure& mu_k, double lambda) {
        double num = 0.0;
        for (int i = 0; i < M; ++i)
            num += std::abs(mu_k.weights[i] - lambda * mu.weights[i]);
        return num / (lambda * mass);
    };

    // Start from the ball on the constraint surface: W_mu(B_r) = 2r.
    detail::Iterate cur = evaluate(
        detail::project_to_constraint(sample_support(disk_body(0.5, 128), M), mu));

    MinkowskiResult res;
    double step = cfg.step0;
    double lambda = lambda_of(cur.fwd.mu);
    double resid = residual_of(cur.fwd.mu, lambda);
    res.trace_F.push_back(cur.F);
    res.trace_residual.push_back(resid);

    for (int outer = 0; outer < cfg.max_outer && resid > cfg.tol; ++outer) {
        // Projected gradient of F on the constraint tangent space.
        std::vector<double> h(M), grad(M), dir(M);
        for (int i = 0; i < M; ++i)
            h[i] = support_function(cur.body, grid_angle(i, M));
        double gg = 0.0, gscale = 0.0;
        for (int i = 0; i < M; ++i) {
            grad[i] = factor * cur.fwd.mu.weights[i];
            gg += grad[i] * mu.weights[i];
            gscale += mu.weights[i] * mu.weights[i];
        }
        double coef = gg / gscale;
        double dnorm = 0.0;
        for (int i = 0; i < M; ++i) {
            dir[i] = grad[i] - coef * mu.weights[i];
            dnorm = std::max(dnorm, std::abs(dir[i]));
        }
        if (!(dnorm > 0.0)) break;

        bool accepted = false;
        while (step >= cfg.step_min) {
            SupportVector sv{M, std::vector<double>(M)};
            for (int i = 0; i < M; ++i) sv.values[i] = h[i] + step * dir[i] / dnorm;
            detail::Iterate trial;
            try {
                trial = evaluate(detail::project_to_constraint(sv, mu));
            } catch (const Error&) {
                step *= 0.5;
                continue;
            }
            if (trial.F >= cur.F * (1.0 - 1e-9)) {
                cur = std::move(trial);
                accepted = true;
                step = std::min(step * 1.25, 4.0 * cfg.step0);
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // line search exhausted: stationary for this mesh

        lambda = lambda_of(cur.fwd.mu);
        resid = residual_of(cur.fwd.mu, lambda);
        res.trace_F.push_back(cur.F);
        res.trace_residual.push_back(resid);
        res.iterations = outer + 1;
    }

    if (!(lambda > 0.0)) throw CollapseDetected("vanishing multiplier at the maximizer");
    res.lambda = lambda;
    res.rescale_t = std::pow(lambda, -1.0 / gamma);

    // Dilate so the measure matches the target in scale, then re-evaluate the
    // final residual directly against the target.
    ConvexBody final_body = recenter(transform(cur.body, res.rescale_t, {0, 0})).body;
    ForwardResult check = run_forward(final_body, cfg.pde, M);
    res.residual = measure_residual(check.mu, mu);
    res.body = final_body;
    return res;
}

} // namespace minklab
