#pragma once

#include "core.hpp"

namespace minklab {

// ---------------------------------------------------------------------------
// Radial shooting oracle on the ball B_R
// ---------------------------------------------------------------------------
//
// phi'' + (N-1)/r phi' = -phi^beta on (0,R), phi'(0) = 0, phi(R) = 0.
// The solution is radial and strictly decreasing in r, so shooting on the
// center value a = phi(0) with bisection converges monotonically: too small
// an a hits zero before R, too large an a stays positive at R.

struct RadialSolution {
    double R = 1.0;
    int N = 2;
    double beta = 0.5;
    double center_value = 0.0;   // phi(0)
    double boundary_slope = 0.0; // phi'(R)
    double step_error = 0.0;     // |phi(0)_n - phi(0)_{2n}| step-halving gap
    std::vector<double> r, phi;  // uniform profile on [0, R]
};

namespace detail {

struct ShotResult {
    bool survived = false; // reached R with phi > 0
    double value = 0.0;    // phi(R) if survived, else -(R - r_hit)
    double slope = 0.0;    // phi' at the end point
};

/// Integrate one shot with n fixed RK4 steps. The series start
/// phi = a - a^beta r^2/(2N) + O(r^4) avoids the 1/r singularity.
/// If sample_every > 0, store every that many steps into out_r/out_phi.
inline ShotResult radial_shot(double a, double R, int N, double beta, int n,
                              int sample_every = 0,
                              std::vector<double>* out_r = nullptr,
                              std::vector<double>* out_phi = nullptr) {
    const double r0 = R * 1e-9;
    double u = a - std::pow(a, beta) * r0 * r0 / (2.0 * N);
    double v = -std::pow(a, beta) * r0 / N;
    double r = r0;
    const double h = (R - r0) / n;

    auto f = [&](double rr, double uu, double vv, double& du, double& dv) {
        double load = std::pow(std::max(uu, 0.0), beta);
        du = vv;
        dv = -load - (N - 1) * vv / rr;
    };

    if (sample_every > 0) {
        out_r->clear();
        out_phi->clear();
        out_r->push_back(0.0);
        out_phi->push_back(a);
    }

    ShotResult res;
    for (int i = 0; i < n; ++i) {
        double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
        f(r, u, v, k1u, k1v);
        f(r + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v, k2u, k2v);
        f(r + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v, k3u, k3v);
        f(r + h, u + h * k3u, v + h * k3v, k4u, k4v);
        double un = u + h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
        double vn = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        double rn = r + h;
        if (un <= 0.0) {
            double t = u / (u - un); // linear zero crossing inside the step
            res.survived = false;
            res.value = -(R - (r + t * h));
            res.slope = v + t * (vn - v);
            return res;
        }
        u = un;
        v = vn;
        r = rn;
        if (sample_every > 0 && (i + 1) % sample_every == 0) {
            out_r->push_back(r);
            out_phi->push_back(u);
        }
    }
    res.survived = true;
    res.value = u;
    res.slope = v;
    return res;
}

} // namespace detail

/// Ground-truth profile by shooting; beta = 0 is admitted here (torsion
/// calibration), unlike in the finite element solver.
inline RadialSolution radial_oracle(double R, int N, double beta, double tol = 1e-12) {
    if (!(R > 0.0)) throw NonpositiveScale("radius must be positive");
    if (N < 1 || beta < 0.0 || beta >= 1.0)
        throw GeometryError("need N >= 1 and beta in [0,1)");

    const int n = 65536;
    auto g = [&](double a) { return detail::radial_shot(a, R, N, beta, n).value; };

    double lo = 1e-12, hi = 1.0;
    int expand = 0;
    while (g(hi) <= 0.0) {
        hi *= 4.0;
        if (++expand > 64) throw BracketFailure("no surviving shot found");
    }
    while (g(lo) >= 0.0) {
        lo *= 0.25;
        if (++expand > 128) throw BracketFailure("no undershooting shot found");
    }
    for (int it = 0; it < 200 && (hi - lo) > tol * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? hi : lo) = mid;
    }
    double a = 0.5 * (lo + hi);

    RadialSolution sol;
    sol.R = R;
    sol.N = N;
    sol.beta = beta;
    sol.center_value = a;
    auto fine = detail::radial_shot(a, R, N, beta, 2 * n, 2 * n / 2048, &sol.r, &sol.phi);
    auto coarse = detail::radial_shot(a, R, N, beta, n);
    sol.boundary_slope = fine.slope;
    sol.step_error = std::abs(fine.value - coarse.value);
    // The shot ends at phi(R) ~ 0 by construction; pin the endpoint.
    if (sol.r.back() < R) {
        sol.r.push_back(R);
        sol.phi.push_back(0.0);
    } else {
        sol.phi.back() = 0.0;
    }
    return sol;
}

/// Linear interpolation of the stored profile.
inline double radial_value(const RadialSolution& sol, double r) {
    if (r <= 0.0) return sol.center_value;
    if (r >= sol.R) return 0.0;
    // Profile is uniform in r except possibly the last knot.
    double step = sol.r[1] - sol.r[0];
    std::size_t i = std::min(static_cast<std::size_t>(r / step), sol.r.size() - 2);
    while (i + 2 < sol.r.size() && r > sol.r[i + 1]) ++i;
    while (i > 0 && r < sol.r[i]) --i;
    double t = (r - sol.r[i]) / (sol.r[i + 1] - sol.r[i]);
    return sol.phi[i] + t * (sol.phi[i + 1] - sol.phi[i]);
}

} // namespace minklab
