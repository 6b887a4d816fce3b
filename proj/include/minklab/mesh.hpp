#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "body.hpp"
#include "core.hpp"

namespace minklab {

// ---------------------------------------------------------------------------
// Conforming Delaunay mesh of a convex body
// ---------------------------------------------------------------------------

struct BoundarySegment {
    int a = 0, b = 0;   // node ids, a -> b runs CCW along the boundary
    int body_edge = 0;  // index into ConvexBody::edges
};

struct Mesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles; // CCW
    std::vector<BoundarySegment> boundary;
    std::vector<std::uint8_t> on_boundary;     // per node
    double min_angle_deg = 0.0;
};

namespace detail {

// Orientation and in-circle tests with a static floating-point filter: values
// inside the error band collapse to zero so ties are handled one way only.
inline double orient2d(Vec2 a, Vec2 b, Vec2 c) {
    double l = (b.x - a.x) * (c.y - a.y);
    double r = (b.y - a.y) * (c.x - a.x);
    double det = l - r;
    if (std::abs(det) <= 1e-14 * (std::abs(l) + std::abs(r))) return 0.0;
    return det;
}

inline double incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    double adx = a.x - d.x, ady = a.y - d.y;
    double bdx = b.x - d.x, bdy = b.y - d.y;
    double cdx = c.x - d.x, cdy = c.y - d.y;
    double ad2 = adx * adx + ady * ady;
    double bd2 = bdx * bdx + bdy * bdy;
    double cd2 = cdx * cdx + cdy * cdy;
    double t1 = adx * (bdy * cd2 - cdy * bd2);
    double t2 = ady * (bdx * cd2 - cdx * bd2);
    double t3 = ad2 * (bdx * cdy - cdx * bdy);
    double det = t1 - t2 + t3;
    double mag = std::abs(t1) + std::abs(t2) + std::abs(t3);
    if (std::abs(det) <= 1e-12 * mag) return 0.0;
    return det;
}

inline Vec2 circumcenter(Vec2 a, Vec2 b, Vec2 c) {
    Vec2 ab = b - a, ac = c - a;
    double d = 2.0 * cross(ab, ac);
    double ab2 = norm2(ab), ac2 = norm2(ac);
    return {a.x + (ac.y * ab2 - ab.y * ac2) / d,
            a.y + (ab.x * ac2 - ac.x * ab2) / d};
}

inline double tri_min_angle(Vec2 a, Vec2 b, Vec2 c) {
    double la = dist(b, c), lb = dist(a, c), lc = dist(a, b);
    auto ang = [](double opp, double s1, double s2) {
        double x = (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2);
        return std::acos(std::clamp(x, -1.0, 1.0));
    };
    return std::min({ang(la, lb, lc), ang(lb, la, lc), ang(lc, la, lb)});
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Incremental Delaunay triangulation with cavity insertion.
class Delaunay {
public:
    struct Tri {
        std::array<int, 3> v;   // CCW
        std::array<int, 3> adj; // adj[k] faces edge (v[k+1], v[k+2])
        bool alive = true;
    };

    std::vector<Vec2> pts;
    std::vector<Tri> tris;

    void init_frame(Vec2 lo, Vec2 hi) {
        Vec2 c = 0.5 * (lo + hi);
        double r = std::max(hi.x - lo.x, hi.y - lo.y) * 8.0 + 1e-3;
        pts = {{c.x - r, c.y - r}, {c.x + r, c.y - r}, {c.x + r, c.y + r}, {c.x - r, c.y + r}};
        tris.push_back(Tri{{0, 1, 2}, {-1, 1, -1}, true});
        tris.push_back(Tri{{0, 2, 3}, {-1, -1, 0}, true});
        last_ = 0;
        stamp_.assign(2, 0);
    }

    bool is_frame(int vid) const { return vid < 4; }

    /// Walk toward p. Returns the containing triangle, or -(segment hint)-2 is
    /// never used here; crossing detection is the caller's business via
    /// locate_with_barrier.
    int locate(Vec2 p) const {
        int t = last_;
        if (t < 0 || !tris[t].alive) {
            t = -1;
            for (int i = static_cast<int>(tris.size()) - 1; i >= 0; --i)
                if (tris[i].alive) { t = i; break; }
        }
        int guard = static_cast<int>(tris.size()) * 4 + 64;
        while (guard-- > 0) {
            const Tri& T = tris[t];
            int next = -1;
            for (int k = 0; k < 3; ++k) {
                Vec2 a = pts[T.v[(k + 1) % 3]], b = pts[T.v[(k + 2) % 3]];
                if (orient2d(a, b, p) < 0.0) { next = T.adj[k]; break; }
            }
            if (next == -1) return t;
            t = next;
        }
        // Degenerate walk; fall back to a scan.
        for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
            if (!tris[i].alive) continue;
            const Tri& T = tris[i];
            bool in = true;
            for (int k = 0; k < 3 && in; ++k)
                in = orient2d(pts[T.v[(k + 1) % 3]], pts[T.v[(k + 2) % 3]], p) >= 0.0;
            if (in) return i;
        }
        throw MeshFailure("point location failed");
    }

    /// Walk toward p but refuse to cross barrier edges. Returns {tri, -1} on
    /// success or {-1, barrier id} for the first barrier crossed.
    std::pair<int, int> locate_with_barrier(
        Vec2 p, int start,
        const std::unordered_map<std::uint64_t, int>& barriers) const {
        int t = start >= 0 && tris[start].alive ? start : locate(p);
        int guard = static_cast<int>(tris.size()) * 4 + 64;
        while (guard-- > 0) {
            const Tri& T = tris[t];
            int next = -1;
            for (int k = 0; k < 3; ++k) {
                int a = T.v[(k + 1) % 3], b = T.v[(k + 2) % 3];
                if (orient2d(pts[a], pts[b], p) < 0.0) {
                    auto it = barriers.find(edge_key(a, b));
                    if (it != barriers.end()) return {-1, it->second};
                    next = T.adj[k];
                    break;
                }
            }
            if (next == -1) return {t, -1};
            t = next;
        }
        throw MeshFailure("barrier walk failed");
    }

    static std::uint64_t edge_key(int a, int b) {
        std::uint64_t lo = static_cast<std::uint64_t>(std::min(a, b));
        std::uint64_t hi = static_cast<std::uint64_t>(std::max(a, b));
        return (hi << 32) | lo;
    }

    struct Cavity {
        std::vector<int> tris;
        // Boundary loop: directed edges (a,b) with the cavity on the left,
        // plus the outside neighbor for stitching.
        std::vector<std::array<int, 3>> loop; // {a, b, outside_tri}
    };

    Cavity compute_cavity(Vec2 p, int t0) {
        Cavity cav;
        ++epoch_;
        stamp_.resize(tris.size(), 0);
        std::vector<int> stack{t0};
        stamp_[t0] = epoch_;
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            cav.tris.push_back(t);
            for (int k = 0; k < 3; ++k) {
                int n = tris[t].adj[k];
                if (n >= 0 && stamp_[n] != epoch_ && tris[n].alive) {
                    const Tri& N = tris[n];
                    if (incircle(pts[N.v[0]], pts[N.v[1]], pts[N.v[2]], p) > 0.0) {
                        stamp_[n] = epoch_;
                        stack.push_back(n);
                    }
                }
            }
        }
        // Star-shape repair: every cavity boundary edge must see p strictly on
        // its left; otherwise shrink the cavity and retry.
        for (int rounds = 0; rounds < 64; ++rounds) {
            cav.loop.clear();
            int bad = -1;
            for (int t : cav.tris) {
                for (int k = 0; k < 3; ++k) {
                    int n = tris[t].adj[k];
                    bool outside = n < 0 || stamp_[n] != epoch_;
                    if (!outside) continue;
                    int a = tris[t].v[(k + 1) % 3], b = tris[t].v[(k + 2) % 3];
                    if (orient2d(pts[a], pts[b], p) <= 0.0) { bad = t; break; }
                    cav.loop.push_back({a, b, n});
                }
                if (bad >= 0) break;
            }
            if (bad < 0) return cav;
            if (cav.tris.size() <= 1) throw MeshFailure("degenerate insertion cavity");
            stamp_[bad] = 0;
            cav.tris.erase(std::find(cav.tris.begin(), cav.tris.end(), bad));
        }
        throw MeshFailure("insertion cavity did not stabilize");
    }

    /// Carve the cavity and connect p to its boundary loop. Returns the new
    /// vertex id and appends the ids of the created triangles.
    int commit(Vec2 p, const Cavity& cav, std::vector<int>* created = nullptr) {
        int vid = static_cast<int>(pts.size());
        pts.push_back(p);
        for (int t : cav.tris) tris[t].alive = false;

        std::unordered_map<int, int> start_of, end_of;
        std::vector<int> fresh;
        fresh.reserve(cav.loop.size());
        for (const auto& e : cav.loop) {
            int id = static_cast<int>(tris.size());
            tris.push_back(Tri{{e[0], e[1], vid}, {-1, -1, e[2]}, true});
            stamp_.push_back(0);
            if (e[2] >= 0) {
                Tri& out = tris[e[2]];
                for (int k = 0; k < 3; ++k) {
                    int oa = out.v[(k + 1) % 3], ob = out.v[(k + 2) % 3];
                    if ((oa == e[1] && ob == e[0]) || (oa == e[0] && ob == e[1]))
                        out.adj[k] = id;
                }
            }
            start_of[e[0]] = id;
            end_of[e[1]] = id;
            fresh.push_back(id);
        }
        for (int id : fresh) {
            Tri& T = tris[id];
            T.adj[0] = start_of.at(T.v[1]); // across edge (v1, vid)
            T.adj[1] = end_of.at(T.v[0]);   // across edge (vid, v0)
        }
        last_ = fresh.empty() ? last_ : fresh.front();
        if (created)
            created->insert(created->end(), fresh.begin(), fresh.end());
        return vid;
    }

    int insert(Vec2 p, std::vector<int>* created = nullptr) {
        int t0 = locate(p);
        return commit(p, compute_cavity(p, t0), created);
    }

private:
    int last_ = -1;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
};

} // namespace detail

// ---------------------------------------------------------------------------
// triangulate: boundary sampling, interior lattice, quality refinement
// ---------------------------------------------------------------------------

/// Mesh the body with boundary spacing <= cfg.mesh_h and interior angles of at
/// least 20 degrees. Every length scale in the construction is proportional
/// to mesh_h and anchored at the origin, so triangulate(t*K, t*h) for dyadic t
/// is exactly the scaled mesh of K.
inline Mesh triangulate(const ConvexBody& body, const SolverConfig& cfg) {
    validate(cfg);
    const double h = cfg.mesh_h;
    const int nedges = static_cast<int>(body.edges.size());

    detail::Delaunay dt;
    auto [bc, br] = enclosing_ball(body);
    dt.init_frame({bc.x - br, bc.y - br}, {bc.x + br, bc.y + br});

    std::vector<std::uint8_t> node_on_boundary(4, 0);

    // Boundary samples, CCW, each polygon edge subdivided to spacing <= h.
    struct Seg { int a, b, edge; };
    std::vector<Seg> segs;
    {
        std::vector<int> ids;
        std::vector<int> seg_edge;
        for (int j = 0; j < nedges; ++j) {
            Vec2 v0 = body.vertices[j];
            Vec2 v1 = body.vertices[(j + 1) % nedges];
            int n = std::max(1, static_cast<int>(std::ceil(body.edges[j].length / h - 1e-12)));
            for (int k = 0; k < n; ++k) {
                double t = static_cast<double>(k) / n;
                int id = dt.insert(v0 + t * (v1 - v0));
                node_on_boundary.resize(dt.pts.size(), 0);
                node_on_boundary[id] = 1;
                ids.push_back(id);
                seg_edge.push_back(j);
            }
        }
        const int nb = static_cast<int>(ids.size());
        for (int k = 0; k < nb; ++k) segs.push_back({ids[k], ids[(k + 1) % nb], seg_edge[k]});
    }

    // Interior points on a hexagonal lattice, kept a safe margin away from the
    // boundary. Spacing and margin scale with h; the lattice is anchored at
    // the origin so dilation commutes with meshing.
    {
        const double s = 0.95 * h;
        const double dy = s * std::sqrt(3.0) / 2.0;
        const double margin = 0.6 * h;
        Vec2 lo{bc.x - br, bc.y - br}, hi{bc.x + br, bc.y + br};
        long r0 = static_cast<long>(std::floor(lo.y / dy)) - 1;
        long r1 = static_cast<long>(std::ceil(hi.y / dy)) + 1;
        for (long r = r0; r <= r1; ++r) {
            double y = r * dy;
            double off = (r & 1L) ? 0.5 * s : 0.0;
            long c0 = static_cast<long>(std::floor((lo.x - off) / s)) - 1;
            long c1 = static_cast<long>(std::ceil((hi.x - off) / s)) + 1;
            for (long c = c0; c <= c1; ++c) {
                std::uint64_t hsh = detail::splitmix64(
                    static_cast<std::uint64_t>(r) * 0x100000001b3ull ^
                    static_cast<std::uint64_t>(c));
                double jx = (static_cast<double>(hsh >> 32) / 4294967296.0 - 0.5) * 2e-6 * s;
                double jy = (static_cast<double>(hsh & 0xffffffffull) / 4294967296.0 - 0.5) * 2e-6 * s;
                Vec2 p{c * s + off + jx, y + jy};
                bool deep = true;
                for (int j = 0; j < nedges && deep; ++j) {
                    double d = dot(p - body.vertices[j], body.edges[j].normal);
                    deep = d <= -margin;
                }
                if (!deep) continue;
                int id = dt.insert(p);
                node_on_boundary.resize(dt.pts.size(), 0);
            }
        }
    }

    // Segment bookkeeping for the refinement phase.
    std::unordered_map<std::uint64_t, int> seg_index; // edge key -> index in segs
    auto rekey = [&]() {
        seg_index.clear();
        for (int i = 0; i < static_cast<int>(segs.size()); ++i)
            seg_index[detail::Delaunay::edge_key(segs[i].a, segs[i].b)] = i;
    };
    rekey();

    const double scale = std::max(br, h);
    const double dup_tol = 1e-9 * scale;
    const std::size_t node_budget = 400000;
    const double target = 20.5 * kPi / 180.0;

    auto encroached_by = [&](const Seg& s, Vec2 p) {
        Vec2 a = dt.pts[s.a], b = dt.pts[s.b];
        Vec2 mid = 0.5 * (a + b);
        double r2 = 0.25 * norm2(b - a);
        return norm2(p - mid) < r2 * (1.0 - 1e-12);
    };

    std::vector<std::uint64_t> split_queue; // segment edge keys
    std::vector<int> skinny_queue;          // triangle ids

    auto queue_new_tris = [&](const std::vector<int>& created) {
        for (int t : created) {
            const auto& T = dt.tris[t];
            if (dt.is_frame(T.v[0]) || dt.is_frame(T.v[1]) || dt.is_frame(T.v[2])) continue;
            skinny_queue.push_back(t);
            for (int k = 0; k < 3; ++k) {
                int a = T.v[(k + 1) % 3], b = T.v[(k + 2) % 3];
                auto key = detail::Delaunay::edge_key(a, b);
                auto it = seg_index.find(key);
                if (it != seg_index.end() && encroached_by(segs[it->second], dt.pts[T.v[k]]))
                    split_queue.push_back(key);
            }
        }
    };

    auto split_segment = [&](int si) {
        Seg s = segs[si];
        Vec2 mid = 0.5 * (dt.pts[s.a] + dt.pts[s.b]);
        if (dist(dt.pts[s.a], dt.pts[s.b]) < 4.0 * dup_tol)
            throw MeshFailure("segment split underflow; boundary geometry too sharp");
        std::vector<int> created;
        int vid = dt.insert(mid, &created);
        node_on_boundary.resize(dt.pts.size(), 0);
        node_on_boundary[vid] = 1;
        seg_index.erase(detail::Delaunay::edge_key(s.a, s.b));
        segs[si] = {s.a, vid, s.edge};
        segs.push_back({vid, s.b, s.edge});
        seg_index[detail::Delaunay::edge_key(s.a, vid)] = si;
        seg_index[detail::Delaunay::edge_key(vid, s.b)] = static_cast<int>(segs.size()) - 1;
        queue_new_tris(created);
    };

    // Full sweeps find missing or encroached segments; the queues then drain
    // with local checks only.
    for (int outer = 0; outer < 64; ++outer) {
        if (dt.pts.size() > node_budget) throw MeshFailure("node budget exceeded");

        // Sweep: all segments must appear as triangle edges, unencroached.
        std::unordered_map<std::uint64_t, int> present;
        for (int t = 0; t < static_cast<int>(dt.tris.size()); ++t) {
            if (!dt.tris[t].alive) continue;
            const auto& T = dt.tris[t];
            for (int k = 0; k < 3; ++k) {
                int a = T.v[(k + 1) % 3], b = T.v[(k + 2) % 3];
                auto it = seg_index.find(detail::Delaunay::edge_key(a, b));
                if (it == seg_index.end()) continue;
                present[detail::Delaunay::edge_key(a, b)] = t;
                if (!dt.is_frame(T.v[k]) && encroached_by(segs[it->second], dt.pts[T.v[k]]))
                    split_queue.push_back(detail::Delaunay::edge_key(a, b));
            }
        }
        for (const Seg& s : segs) {
            auto key = detail::Delaunay::edge_key(s.a, s.b);
            if (!present.count(key)) split_queue.push_back(key); // missing: split to recover
        }

        if (split_queue.empty() && skinny_queue.empty() && outer > 0) break;

        // Seed the quality queue on the first pass.
        if (outer == 0) {
            for (int t = 0; t < static_cast<int>(dt.tris.size()); ++t) {
                if (!dt.tris[t].alive) continue;
                const auto& T = dt.tris[t];
                if (dt.is_frame(T.v[0]) || dt.is_frame(T.v[1]) || dt.is_frame(T.v[2])) continue;
                skinny_queue.push_back(t);
            }
        }

        while (!split_queue.empty() || !skinny_queue.empty()) {
            if (dt.pts.size() > node_budget) throw MeshFailure("node budget exceeded");
            if (!split_queue.empty()) {
                std::uint64_t key = split_queue.back();
                split_queue.pop_back();
                auto it = seg_index.find(key);
                if (it == seg_index.end()) continue; // stale: already split
                split_segment(it->second);
                continue;
            }
            int t = skinny_queue.back();
            skinny_queue.pop_back();
            if (!dt.tris[t].alive) continue;
            const auto& T = dt.tris[t];
            if (dt.is_frame(T.v[0]) || dt.is_frame(T.v[1]) || dt.is_frame(T.v[2])) continue;
            Vec2 a = dt.pts[T.v[0]], b = dt.pts[T.v[1]], c = dt.pts[T.v[2]];
            if (detail::tri_min_angle(a, b, c) >= target) continue;

            Vec2 cc = detail::circumcenter(a, b, c);
            auto [tloc, barrier] = dt.locate_with_barrier(cc, t, seg_index);
            if (barrier >= 0) {
                split_queue.push_back(detail::Delaunay::edge_key(segs[barrier].a, segs[barrier].b));
                skinny_queue.push_back(t);
                continue;
            }

            // Duplicate guard: give up on this triangle if cc sits on a node.
            bool dup = false;
            for (int vv : dt.tris[tloc].v) dup = dup || dist(dt.pts[vv], cc) < dup_tol;
            if (dup) continue;

            auto cav = dt.compute_cavity(cc, tloc);
            std::unordered_set<std::uint64_t> loop_keys;
            for (const auto& e : cav.loop)
                loop_keys.insert(detail::Delaunay::edge_key(e[0], e[1]));
            // Reject the insertion if it would encroach a segment or swallow
            // one into the cavity interior; split those segments instead.
            std::vector<std::uint64_t> enc;
            for (int ct : cav.tris) {
                const auto& CT = dt.tris[ct];
                for (int k = 0; k < 3; ++k) {
                    auto key = detail::Delaunay::edge_key(CT.v[(k + 1) % 3], CT.v[(k + 2) % 3]);
                    auto it = seg_index.find(key);
                    if (it == seg_index.end()) continue;
                    if (!loop_keys.count(key) || encroached_by(segs[it->second], cc))
                        enc.push_back(key);
                }
            }
            if (!enc.empty()) {
                for (auto key : enc) split_queue.push_back(key);
                skinny_queue.push_back(t);
                continue;
            }
            std::vector<int> created;
            dt.commit(cc, cav, &created);
            node_on_boundary.resize(dt.pts.size(), 0);
            queue_new_tris(created);
        }
    }

    // Assemble the final mesh: drop the frame, remap node ids.
    Mesh mesh;
    std::vector<int> remap(dt.pts.size(), -1);
    for (int i = 4; i < static_cast<int>(dt.pts.size()); ++i) {
        remap[i] = static_cast<int>(mesh.nodes.size());
        mesh.nodes.push_back(dt.pts[i]);
        mesh.on_boundary.push_back(node_on_boundary[i]);
    }
    double min_angle = kPi;
    std::unordered_set<std::uint64_t> tri_edges;
    for (const auto& T : dt.tris) {
        if (!T.alive) continue;
        if (dt.is_frame(T.v[0]) || dt.is_frame(T.v[1]) || dt.is_frame(T.v[2])) continue;
        mesh.triangles.push_back({remap[T.v[0]], remap[T.v[1]], remap[T.v[2]]});
        min_angle = std::min(min_angle,
                             detail::tri_min_angle(dt.pts[T.v[0]], dt.pts[T.v[1]], dt.pts[T.v[2]]));
        for (int k = 0; k < 3; ++k)
            tri_edges.insert(detail::Delaunay::edge_key(remap[T.v[(k + 1) % 3]],
                                                        remap[T.v[(k + 2) % 3]]));
    }
    mesh.min_angle_deg = min_angle * 180.0 / kPi;

    for (const Seg& s : segs)
        mesh.boundary.push_back({remap[s.a], remap[s.b], s.edge});
    for (const BoundarySegment& s : mesh.boundary) {
        if (!tri_edges.count(detail::Delaunay::edge_key(s.a, s.b)))
            throw MeshFailure("boundary segment missing from the triangulation");
    }
    if (mesh.min_angle_deg < 20.0 - 1e-9)
        throw MeshFailure("refinement finished below the angle floor");
    if (mesh.triangles.empty()) throw MeshFailure("empty triangulation");
    return mesh;
}

// ---------------------------------------------------------------------------
// Point location and P1 interpolation on a finished mesh
// ---------------------------------------------------------------------------

/// Uniform-bin accelerator for point-in-triangle queries.
class PointLocator {
public:
    explicit PointLocator(const Mesh& mesh) : mesh_(mesh) {
        lo_ = hi_ = mesh.nodes.at(0);
        for (Vec2 p : mesh.nodes) {
            lo_.x = std::min(lo_.x, p.x); lo_.y = std::min(lo_.y, p.y);
            hi_.x = std::max(hi_.x, p.x); hi_.y = std::max(hi_.y, p.y);
        }
        n_ = std::max(1, static_cast<int>(std::sqrt(mesh.triangles.size() / 2.0)));
        bins_.resize(static_cast<std::size_t>(n_) * n_);
        for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
            auto [i0, j0, i1, j1] = tri_span(t);
            for (int j = j0; j <= j1; ++j)
                for (int i = i0; i <= i1; ++i)
                    bins_[static_cast<std::size_t>(j) * n_ + i].push_back(t);
        }
    }

    /// Triangle containing p (with tolerance), or -1.
    int find(Vec2 p, std::array<double, 3>* bary = nullptr) const {
        int i = clampi(static_cast<int>((p.x - lo_.x) / (hi_.x - lo_.x + 1e-300) * n_));
        int j = clampi(static_cast<int>((p.y - lo_.y) / (hi_.y - lo_.y + 1e-300) * n_));
        int best = -1;
        double best_viol = 1e300;
        std::array<double, 3> best_l{};
        for (int t : bins_[static_cast<std::size_t>(j) * n_ + i]) {
            auto [v0, v1, v2] = mesh_.triangles[t];
            Vec2 a = mesh_.nodes[v0], b = mesh_.nodes[v1], c = mesh_.nodes[v2];
            double area2 = cross(b - a, c - a);
            double l0 = cross(b - p, c - p) / area2;
            double l1 = cross(c - p, a - p) / area2;
            double l2 = 1.0 - l0 - l1;
            double viol = -std::min({l0, l1, l2});
            if (viol < best_viol) {
                best_viol = viol;
                best = t;
                best_l = {l0, l1, l2};
            }
        }
        if (best < 0 || best_viol > 1e-9) return -1;
        if (bary) *bary = best_l;
        return best;
    }

private:
    int clampi(int v) const { return std::clamp(v, 0, n_ - 1); }

    std::tuple<int, int, int, int> tri_span(int t) const {
        Vec2 tlo = mesh_.nodes[mesh_.triangles[t][0]], thi = tlo;
        for (int k = 1; k < 3; ++k) {
            Vec2 p = mesh_.nodes[mesh_.triangles[t][k]];
            tlo.x = std::min(tlo.x, p.x); tlo.y = std::min(tlo.y, p.y);
            thi.x = std::max(thi.x, p.x); thi.y = std::max(thi.y, p.y);
        }
        int i0 = clampi(static_cast<int>((tlo.x - lo_.x) / (hi_.x - lo_.x + 1e-300) * n_));
        int i1 = clampi(static_cast<int>((thi.x - lo_.x) / (hi_.x - lo_.x + 1e-300) * n_));
        int j0 = clampi(static_cast<int>((tlo.y - lo_.y) / (hi_.y - lo_.y + 1e-300) * n_));
        int j1 = clampi(static_cast<int>((thi.y - lo_.y) / (hi_.y - lo_.y + 1e-300) * n_));
        return {i0, j0, i1, j1};
    }

    const Mesh& mesh_;
    Vec2 lo_, hi_;
    int n_ = 1;
    std::vector<std::vector<int>> bins_;
};

inline double mesh_area(const Mesh& mesh) {
    double a = 0.0;
    for (const auto& t : mesh.triangles) {
        Vec2 p = mesh.nodes[t[0]], q = mesh.nodes[t[1]], r = mesh.nodes[t[2]];
        a += 0.5 * cross(q - p, r - p);
    }
    return a;
}

} // namespace minklab
