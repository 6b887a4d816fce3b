#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>

#include "core.hpp"

namespace minklab {

// ---------------------------------------------------------------------------
// Convex bodies as CCW vertex lists
// ---------------------------------------------------------------------------

struct BodyEdge {
    Vec2 normal;         // outward unit normal
    double length = 0.0;
    double normal_angle = 0.0; // in [0, 2*pi)
};

/// Compact convex polygon with nonempty interior. Vertices are CCW and
/// strictly convex (collinear chains are merged at construction). Build only
/// through make_body so the invariants hold.
struct ConvexBody {
    std::vector<Vec2> vertices;
    std::vector<BodyEdge> edges; // edge i runs vertices[i] -> vertices[i+1]
    double area = 0.0;
};

namespace detail {

inline double signed_area(const std::vector<Vec2>& v) {
    double a = 0.0;
    const int n = static_cast<int>(v.size());
    for (int i = 0; i < n; ++i) a += cross(v[i], v[(i + 1) % n]);
    return 0.5 * a;
}

inline double coord_scale(const std::vector<Vec2>& v) {
    double s = 0.0;
    for (Vec2 p : v) s = std::max({s, std::abs(p.x), std::abs(p.y)});
    return std::max(s, 1e-30);
}

} // namespace detail

inline ConvexBody make_body(std::vector<Vec2> verts) {
    for (Vec2 p : verts) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw GeometryError("vertex coordinates must be finite");
    }
    if (verts.size() < 3) throw EmptyInterior("need at least three vertices");
    if (detail::signed_area(verts) < 0.0) std::reverse(verts.begin(), verts.end());

    const double s = detail::coord_scale(verts);
    const double merge_tol = 1e-12 * s;
    const double turn_tol = 1e-12 * s * s;

    // Drop duplicate vertices.
    std::vector<Vec2> v;
    for (Vec2 p : verts) {
        if (v.empty() || dist(v.back(), p) > merge_tol) v.push_back(p);
    }
    while (v.size() > 1 && dist(v.front(), v.back()) <= merge_tol) v.pop_back();

    // Merge collinear chains; reject reflex turns.
    bool changed = true;
    while (changed && v.size() >= 3) {
        changed = false;
        std::vector<Vec2> out;
        const int n = static_cast<int>(v.size());
        for (int i = 0; i < n; ++i) {
            Vec2 prev = v[(i + n - 1) % n], cur = v[i], next = v[(i + 1) % n];
            double turn = cross(cur - prev, next - cur);
            if (turn <= turn_tol) {
                if (turn < -turn_tol) throw GeometryError("vertex list is not convex");
                changed = true; // collinear within tolerance: drop cur
                continue;
            }
            out.push_back(cur);
        }
        v = std::move(out);
    }
    if (v.size() < 3) throw EmptyInterior("polygon degenerates to a segment");

    double area = detail::signed_area(v);
    if (area <= 1e-14 * s * s) throw EmptyInterior("polygon area is numerically zero");

    ConvexBody body;
    body.vertices = std::move(v);
    body.area = area;
    const int n = static_cast<int>(body.vertices.size());
    body.edges.resize(n);
    for (int i = 0; i < n; ++i) {
        Vec2 d = body.vertices[(i + 1) % n] - body.vertices[i];
        double len = norm(d);
        Vec2 nrm{d.y / len, -d.x / len};
        body.edges[i] = BodyEdge{nrm, len, angle_of(nrm)};
    }
    return body;
}

// ---------------------------------------------------------------------------
// Support function and sampled support vectors
// ---------------------------------------------------------------------------

/// h_K(theta) = max over vertices of v . xi(theta).
inline double support_function(const ConvexBody& body, double theta) {
    Vec2 xi = unit_vector(theta);
    double h = -1e300;
    for (Vec2 v : body.vertices) h = std::max(h, dot(v, xi));
    return h;
}

/// Index of the vertex attaining the support value in direction xi.
inline int support_vertex(const ConvexBody& body, Vec2 xi) {
    int best = 0;
    double hb = dot(body.vertices[0], xi);
    for (int i = 1; i < static_cast<int>(body.vertices.size()); ++i) {
        double h = dot(body.vertices[i], xi);
        if (h > hb) { hb = h; best = i; }
    }
    return best;
}

/// Support values sampled on the uniform direction grid.
struct SupportVector {
    int directions = 0;
    std::vector<double> values;
};

inline SupportVector sample_support(const ConvexBody& body, int M) {
    if (M < 3) throw GeometryError("need at least three directions");
    SupportVector sv{M, std::vector<double>(M)};
    for (int i = 0; i < M; ++i) sv.values[i] = support_function(body, grid_angle(i, M));
    return sv;
}

/// Largest body with the given support bound: intersection of the half-planes
/// x . xi_i <= h_i. With a full uniform grid the intersection is bounded, so
/// clipping starts from a box that provably contains it.
inline ConvexBody body_from_support(const SupportVector& sv) {
    const int M = sv.directions;
    if (M < 3 || static_cast<int>(sv.values.size()) != M)
        throw GeometryError("support vector length must equal direction count");
    double hmax = 0.0;
    for (double h : sv.values) {
        if (!std::isfinite(h)) throw GeometryError("support values must be finite");
        hmax = std::max(hmax, std::abs(h));
    }
    // |x| <= max_i h_i / cos(pi/M) <= 2*hmax for every x in the intersection.
    const double B = 2.0 * hmax + 1.0;
    std::vector<Vec2> poly{{-B, -B}, {B, -B}, {B, B}, {-B, B}};

    for (int i = 0; i < M; ++i) {
        Vec2 n = unit_vector(grid_angle(i, M));
        double h = sv.values[i];
        std::vector<Vec2> out;
        const int np = static_cast<int>(poly.size());
        for (int j = 0; j < np; ++j) {
            Vec2 p = poly[j], q = poly[(j + 1) % np];
            double sp = h - dot(p, n), sq = h - dot(q, n);
            if (sp >= 0.0) out.push_back(p);
            if ((sp >= 0.0) != (sq >= 0.0)) {
                double t = sp / (sp - sq);
                out.push_back(p + t * (q - p));
            }
        }
        poly = std::move(out);
        if (poly.size() < 3) throw EmptyInterior("support bound has empty interior");
    }
    return make_body(std::move(poly));
}

// ---------------------------------------------------------------------------
// Minkowski sum by CCW edge merge
// ---------------------------------------------------------------------------

namespace detail {

inline int bottom_vertex(const ConvexBody& b) {
    int k = 0;
    for (int i = 1; i < static_cast<int>(b.vertices.size()); ++i) {
        Vec2 p = b.vertices[i], q = b.vertices[k];
        if (p.y < q.y || (p.y == q.y && p.x < q.x)) k = i;
    }
    return k;
}

/// Edge vectors in CCW order from the bottom-most vertex, with their angles
/// unwrapped to a non-decreasing sequence in [0, 2*pi).
inline void edge_fan(const ConvexBody& b, std::vector<Vec2>& edges, std::vector<double>& angles) {
    const int n = static_cast<int>(b.vertices.size());
    const int k0 = bottom_vertex(b);
    edges.resize(n);
    angles.resize(n);
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec2 d = b.vertices[(k0 + i + 1) % n] - b.vertices[(k0 + i) % n];
        edges[i] = d;
        double a = angle_of(d);
        if (a < prev) a = (prev - a > kPi) ? a + kTwoPi : prev;
        angles[i] = a;
        prev = a;
    }
}

} // namespace detail

inline ConvexBody minkowski_sum(const ConvexBody& a, const ConvexBody& b) {
    std::vector<Vec2> ea, eb;
    std::vector<double> aa, ab;
    detail::edge_fan(a, ea, aa);
    detail::edge_fan(b, eb, ab);

    Vec2 p = a.vertices[detail::bottom_vertex(a)] + b.vertices[detail::bottom_vertex(b)];
    std::vector<Vec2> verts;
    verts.reserve(ea.size() + eb.size());
    std::size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
        verts.push_back(p);
        if (j == eb.size() || (i < ea.size() && aa[i] < ab[j] - 1e-12)) {
            p += ea[i++];
        } else if (i == ea.size() || ab[j] < aa[i] - 1e-12) {
            p += eb[j++];
        } else {
            p += ea[i++] + eb[j++];
        }
    }
    return make_body(std::move(verts));
}

// ---------------------------------------------------------------------------
// Hausdorff distance via exact support comparison
// ---------------------------------------------------------------------------

/// sup over directions of |h_a - h_b|. The difference is a single sinusoid on
/// each arc between edge-normal breakpoints, so the supremum is attained at a
/// breakpoint or at the sinusoid's own peak; both are checked exactly.
inline double hausdorff_distance(const ConvexBody& a, const ConvexBody& b) {
    std::vector<double> brk;
    for (const BodyEdge& e : a.edges) brk.push_back(e.normal_angle);
    for (const BodyEdge& e : b.edges) brk.push_back(e.normal_angle);
    std::sort(brk.begin(), brk.end());
    brk.push_back(brk.front() + kTwoPi);

    double best = 0.0;
    auto probe = [&](double theta) {
        best = std::max(best, std::abs(support_function(a, theta) - support_function(b, theta)));
    };
    for (std::size_t k = 0; k + 1 < brk.size(); ++k) {
        double t0 = brk[k], t1 = brk[k + 1];
        probe(t0);
        if (t1 - t0 < 1e-15) continue;
        double tm = 0.5 * (t0 + t1);
        Vec2 d = a.vertices[support_vertex(a, unit_vector(tm))] -
                 b.vertices[support_vertex(b, unit_vector(tm))];
        // On this arc h_a - h_b = d . xi(theta); |.| peaks where xi || d,
        // i.e. at angle_of(d) modulo pi. Breakpoints live in [0, 4*pi).
        double peak = angle_of(d);
        for (int q = -1; q <= 4; ++q) {
            double c = peak + q * kPi;
            if (c > t0 && c < t1) probe(c);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Mean width, Steiner point, rigid motions
// ---------------------------------------------------------------------------

/// W_mu(K) = (2 / mu(S^1)) * sum_i w_i h_K(theta_i). Uniform weights recover
/// the classical mean width (2 for the unit disk).
inline double mean_width(const ConvexBody& body, const SurfaceMeasure& mu) {
    double m = mu.mass();
    if (!(m > 0.0)) throw ZeroMassMeasure("mean width needs positive total mass");
    double acc = 0.0;
    for (int i = 0; i < mu.directions; ++i)
        acc += mu.weights[i] * support_function(body, grid_angle(i, mu.directions));
    return 2.0 * acc / m;
}

/// Exact integral (1/pi) * int xi h_K(xi) dtheta. On the arc of directions
/// supported by vertex v the integrand is xi (v . xi); the primitive is known
/// in closed form, so no quadrature is involved.
inline Vec2 steiner_point(const ConvexBody& body) {
    const int n = static_cast<int>(body.vertices.size());
    auto C2 = [](double t) { return 0.5 * (t + std::sin(t) * std::cos(t)); };
    auto S2 = [](double t) { return 0.5 * (t - std::sin(t) * std::cos(t)); };
    auto SC = [](double t) { return -0.25 * std::cos(2.0 * t); };

    Vec2 acc{0.0, 0.0};
    double a0 = body.edges[n - 1].normal_angle;
    for (int i = 0; i < n; ++i) {
        // Vertex i is supported between the normals of edges i-1 and i.
        double a1 = body.edges[i].normal_angle;
        if (a1 < a0) a1 += kTwoPi;
        Vec2 v = body.vertices[i];
        acc.x += v.x * (C2(a1) - C2(a0)) + v.y * (SC(a1) - SC(a0));
        acc.y += v.x * (SC(a1) - SC(a0)) + v.y * (S2(a1) - S2(a0));
        a0 = a1;
    }
    return acc * (1.0 / kPi);
}

/// Mean width under the arc-length measure, (1/pi) * int h dtheta, by the
/// same exact per-vertex-arc primitives as the Steiner point.
inline double mean_width_exact(const ConvexBody& body) {
    const int n = static_cast<int>(body.vertices.size());
    double acc = 0.0;
    double a0 = body.edges[n - 1].normal_angle;
    for (int i = 0; i < n; ++i) {
        double a1 = body.edges[i].normal_angle;
        if (a1 < a0) a1 += kTwoPi;
        Vec2 v = body.vertices[i];
        acc += v.x * (std::sin(a1) - std::sin(a0)) + v.y * (std::cos(a0) - std::cos(a1));
        a0 = a1;
    }
    return acc / kPi;
}

/// Image t*K + x0 with t > 0.
inline ConvexBody transform(const ConvexBody& body, double t, Vec2 x0) {
    if (!(t > 0.0)) throw NonpositiveScale("scale factor must be positive");
    std::vector<Vec2> v;
    v.reserve(body.vertices.size());
    for (Vec2 p : body.vertices) v.push_back(t * p + x0);
    return make_body(std::move(v));
}

inline ConvexBody translate(const ConvexBody& body, Vec2 x0) { return transform(body, 1.0, x0); }

struct Recentered {
    ConvexBody body;
    Vec2 offset; // Steiner point of the input; body = input - offset
};

/// Translate so the Steiner point sits at the origin.
inline Recentered recenter(const ConvexBody& body) {
    Vec2 s = steiner_point(body);
    return Recentered{translate(body, -s), s};
}

inline double diameter(const ConvexBody& body) {
    double d = 0.0;
    const int n = static_cast<int>(body.vertices.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            d = std::max(d, dist(body.vertices[i], body.vertices[j]));
    return d;
}

/// Radius of a ball about c that contains the body, with c the bounding-box
/// center. An enclosing radius is all the a-priori bounds need.
inline std::pair<Vec2, double> enclosing_ball(const ConvexBody& body) {
    Vec2 lo = body.vertices[0], hi = body.vertices[0];
    for (Vec2 p : body.vertices) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
    }
    Vec2 c = 0.5 * (lo + hi);
    double r = 0.0;
    for (Vec2 p : body.vertices) r = std::max(r, dist(p, c));
    return {c, r};
}

// ---------------------------------------------------------------------------
// Stock shapes and randomized bodies
// ---------------------------------------------------------------------------

inline ConvexBody regular_polygon(int n, double radius, double phase = 0.0) {
    if (n < 3) throw GeometryError("polygon needs at least three vertices");
    if (!(radius > 0.0)) throw NonpositiveScale("radius must be positive");
    std::vector<Vec2> v(n);
    for (int k = 0; k < n; ++k) v[k] = radius * unit_vector(phase + kTwoPi * k / n);
    return make_body(std::move(v));
}

/// 256-gon stand-in for the unit disk; inscribed, so it underestimates by
/// less than 8e-5 in Hausdorff distance.
inline ConvexBody disk_body(double radius = 1.0, int n = 256) {
    return regular_polygon(n, radius);
}

inline ConvexBody square_body(double half_width = 1.0) {
    if (!(half_width > 0.0)) throw NonpositiveScale("half width must be positive");
    double w = half_width;
    return make_body({{-w, -w}, {w, -w}, {w, w}, {-w, w}});
}

struct RandomBodyOptions {
    int directions = 64;     // support samples used for generation
    double scale_min = 0.6;  // base radius range
    double scale_max = 1.6;
    double roughness = 0.25; // relative amplitude of the harmonic perturbation
};

namespace detail {

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

} // namespace detail

/// Deterministic random body: a low-harmonic perturbation of a disk, realized
/// as the largest body under the sampled support bound. Always contains the
/// origin in its interior.
inline ConvexBody random_convex_body(std::uint64_t seed, RandomBodyOptions opt = {}) {
    detail::Rng rng(seed);
    const double r0 = rng.uniform(opt.scale_min, opt.scale_max);
    const int kmax = 5;
    std::vector<double> c(kmax + 1), s(kmax + 1);
    double budget = 0.0;
    for (int k = 2; k <= kmax; ++k) {
        c[k] = rng.uniform(-1.0, 1.0);
        s[k] = rng.uniform(-1.0, 1.0);
        budget += std::abs(c[k]) + std::abs(s[k]);
    }
    // Cap the total harmonic amplitude so h stays well above zero and the
    // perturbation cannot break convexity of the clipped body.
    const double amp = opt.roughness * r0 * rng.uniform(0.2, 1.0);
    const double norm = budget > 0.0 ? amp / budget : 0.0;

    SupportVector sv{opt.directions, std::vector<double>(opt.directions)};
    for (int i = 0; i < opt.directions; ++i) {
        double theta = grid_angle(i, opt.directions);
        double h = r0;
        for (int k = 2; k <= kmax; ++k)
            h += norm * (c[k] * std::cos(k * theta) + s[k] * std::sin(k * theta));
        sv.values[i] = std::max(h, 0.2 * r0);
    }
    return body_from_support(sv);
}

} // namespace minklab
