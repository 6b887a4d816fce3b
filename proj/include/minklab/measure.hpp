#pragma once
#include <concepts>

#include "pde.hpp"

namespace minklab {

// ---------------------------------------------------------------------------
// Variational boundary flux recovery
// ---------------------------------------------------------------------------
//
// For the discrete solution, A phi - M phi^beta vanishes on interior rows; on
// a boundary row j it equals the pairing of the outward flux with the hat
// function v_j, about q(x_j) * w_j with w_j half the length of the adjacent
// boundary segments. Dividing by w_j recovers a nodal flux whose total is
// consistent with the load integral by construction (the rows of A sum to
// zero), which is what makes the recovered measure close under integration.

struct SegmentFlux {
    int a = 0, b = 0;
    int body_edge = 0;
    double length = 0.0;
    double q = 0.0; // outward normal derivative, negative for our solutions
};

struct BoundaryFlux {
    std::vector<SegmentFlux> segments;
    double total_flux = 0.0;     // sum q * length
    double load_integral = 0.0;  // int phi^beta dx, discrete
    double divergence_gap = 0.0; // |total_flux + load| / load
};

inline BoundaryFlux boundary_flux(const ScalarField& field, const ConvexBody& body) {
    const Mesh& mesh = field.mesh;
    for (const auto& s : mesh.boundary) {
        if (s.body_edge < 0 || s.body_edge >= static_cast<int>(body.edges.size()))
            throw GeometryError("mesh boundary tags do not match the body");
    }
    detail::P1System sys = detail::assemble_p1(mesh);
    const int n = static_cast<int>(mesh.nodes.size());
    Eigen::VectorXd phi(n);
    for (int i = 0; i < n; ++i) phi[i] = field.values[i];
    Eigen::VectorXd load_vec =
        field.beta == 0.0 ? Eigen::VectorXd(sys.M * Eigen::VectorXd::Ones(n))
                          : Eigen::VectorXd(sys.M * detail::nodal_power(phi, field.beta));
    Eigen::VectorXd r = sys.A * phi - load_vec;

    std::vector<double> w(n, 0.0);
    for (const auto& s : mesh.boundary) {
        double len = dist(mesh.nodes[s.a], mesh.nodes[s.b]);
        w[s.a] += 0.5 * len;
        w[s.b] += 0.5 * len;
    }
    std::vector<double> qnode(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (mesh.on_boundary[i]) {
            if (!(w[i] > 0.0)) throw MeshFailure("boundary node with no segment");
            qnode[i] = r[i] / w[i];
        }
    }

    BoundaryFlux out;
    out.load_integral = load_vec.sum();
    for (const auto& s : mesh.boundary) {
        double len = dist(mesh.nodes[s.a], mesh.nodes[s.b]);
        double q = 0.5 * (qnode[s.a] + qnode[s.b]);
        out.segments.push_back({s.a, s.b, s.body_edge, len, q});
        out.total_flux += q * len;
    }
    out.divergence_gap =
        std::abs(out.total_flux + out.load_integral) / std::max(out.load_integral, 1e-300);
    return out;
}

// ---------------------------------------------------------------------------
// Gauss-map pushforward onto the direction grid
// ---------------------------------------------------------------------------

/// mu({xi}) = sum over boundary pieces with outward normal xi of q^2 * length.
/// Edge normals are snapped to the nearest grid direction; the snap error is
/// bounded by pi/M and reported by max_snap_error.
inline SurfaceMeasure surface_measure(const BoundaryFlux& flux, const ConvexBody& body, int M) {
    if (M < 3) throw GeometryError("need at least three directions");
    std::vector<double> w(M, 0.0);
    for (const auto& s : flux.segments) {
        int i = snap_to_grid(body.edges[s.body_edge].normal_angle, M);
        w[i] += s.q * s.q * s.length;
    }
    return make_measure(M, std::move(w));
}

inline double max_snap_error(const ConvexBody& body, int M) {
    double worst = 0.0;
    for (const auto& e : body.edges) {
        double g = grid_angle(snap_to_grid(e.normal_angle, M), M);
        double d = std::abs(e.normal_angle - g);
        d = std::min(d, kTwoPi - d);
        worst = std::max(worst, d);
    }
    return worst;
}

/// Mass-normalized first moment sum w_i xi_i / sum w_i.
inline Vec2 measure_centroid(const SurfaceMeasure& mu) {
    double m = mu.mass();
    if (!(m > 0.0)) throw ZeroMassMeasure("centroid of a zero measure");
    Vec2 c{0, 0};
    for (int i = 0; i < mu.directions; ++i)
        c += mu.weights[i] * unit_vector(grid_angle(i, mu.directions));
    return c * (1.0 / m);
}

/// int f dmu for f given as a callable of the angle.
template <class F>
    requires std::invocable<F&, double>
double pair_measure(const SurfaceMeasure& mu, F&& f) {
    double acc = 0.0;
    for (int i = 0; i < mu.directions; ++i)
        acc += mu.weights[i] * f(grid_angle(i, mu.directions));
    return acc;
}

/// int f dmu for f sampled on the same grid.
inline double pair_measure(const SurfaceMeasure& mu, const std::vector<double>& samples) {
    if (static_cast<int>(samples.size()) != mu.directions)
        throw GridMismatch("sample count must equal direction count");
    double acc = 0.0;
    for (int i = 0; i < mu.directions; ++i) acc += mu.weights[i] * samples[i];
    return acc;
}

} // namespace minklab
