#pragma once

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "mesh.hpp"

namespace minklab {

// ---------------------------------------------------------------------------
// P1 finite elements for -laplace(phi) = phi^beta, phi = 0 on the boundary
// ---------------------------------------------------------------------------

struct ScalarField {
    Mesh mesh;
    std::vector<double> values; // nodal, zero on boundary nodes
    double beta = 0.5;          // exponent the field satisfies
};

struct SolveTrace {
    int iterations = 0;
    double final_change = 0.0;   // last sup-norm update, relative
    double final_residual = 0.0; // interior residual, relative inf-norm
    bool monotone = true;        // iterates never increased materially
    std::vector<double> sup_change;
};

namespace detail {

using SpMat = Eigen::SparseMatrix<double>;

/// Assembled P1 operators on a mesh: stiffness A, consistent mass M, lumped
/// mass, and the interior index map.
struct P1System {
    SpMat A, M;
    Eigen::VectorXd lump;
    std::vector<int> interior;  // node id -> interior index or -1
    std::vector<int> inodes;    // interior index -> node id
    SpMat A_ii;
};

inline P1System assemble_p1(const Mesh& mesh) {
    const int n = static_cast<int>(mesh.nodes.size());
    P1System sys;
    std::vector<Eigen::Triplet<double>> ta, tm;
    ta.reserve(mesh.triangles.size() * 9);
    tm.reserve(mesh.triangles.size() * 9);
    sys.lump = Eigen::VectorXd::Zero(n);

    for (const auto& t : mesh.triangles) {
        Vec2 p[3] = {mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]};
        double area2 = cross(p[1] - p[0], p[2] - p[0]);
        double area = 0.5 * area2;
        Vec2 g[3];
        for (int k = 0; k < 3; ++k) {
            Vec2 d = p[(k + 2) % 3] - p[(k + 1) % 3];
            g[k] = Vec2{-d.y, d.x} * (1.0 / area2);
        }
        for (int i = 0; i < 3; ++i) {
            sys.lump[t[i]] += area / 3.0;
            for (int j = 0; j < 3; ++j) {
                ta.emplace_back(t[i], t[j], area * dot(g[i], g[j]));
                tm.emplace_back(t[i], t[j], area / 12.0 * (i == j ? 2.0 : 1.0));
            }
        }
    }
    sys.A.resize(n, n);
    sys.M.resize(n, n);
    sys.A.setFromTriplets(ta.begin(), ta.end());
    sys.M.setFromTriplets(tm.begin(), tm.end());

    sys.interior.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        if (!mesh.on_boundary[i]) {
            sys.interior[i] = static_cast<int>(sys.inodes.size());
            sys.inodes.push_back(i);
        }
    }
    const int ni = static_cast<int>(sys.inodes.size());
    std::vector<Eigen::Triplet<double>> tii;
    for (int col = 0; col < n; ++col) {
        if (sys.interior[col] < 0) continue;
        for (SpMat::InnerIterator it(sys.A, col); it; ++it) {
            int ri = sys.interior[static_cast<int>(it.row())];
            if (ri >= 0) tii.emplace_back(ri, sys.interior[col], it.value());
        }
    }
    sys.A_ii.resize(ni, ni);
    sys.A_ii.setFromTriplets(tii.begin(), tii.end());
    return sys;
}

inline Eigen::VectorXd nodal_power(const Eigen::VectorXd& v, double beta) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out[i] = std::pow(std::max(v[i], 0.0), beta);
    return out;
}

} // namespace detail

/// Monotone fixed point phi_{k+1} = A^{-1} M phi_k^beta started from a
/// discrete supersolution c0 * torsion, where c0 is chosen so the first step
/// already decreases. The Delaunay mesh makes A an M-matrix, so A^{-1} >= 0
/// entrywise and the whole iteration decreases pointwise; convergence is
/// geometric because the right side is sub-linear.
inline ScalarField solve_sublinear(const Mesh& mesh, const SolverConfig& cfg,
                                   SolveTrace* trace = nullptr) {
    validate(cfg);
    detail::P1System sys = detail::assemble_p1(mesh);
    const int n = static_cast<int>(mesh.nodes.size());
    const int ni = static_cast<int>(sys.inodes.size());
    if (ni == 0) throw MeshFailure("mesh has no interior nodes; decrease mesh_h");

    Eigen::ConjugateGradient<detail::SpMat, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>> cg;
    cg.setTolerance(cfg.lin_tol);
    cg.setMaxIterations(4 * ni + 200);
    cg.compute(sys.A_ii);
    if (cg.info() != Eigen::Success) throw NonConvergence("stiffness factorization failed");

    auto restrict_interior = [&](const Eigen::VectorXd& full) {
        Eigen::VectorXd v(ni);
        for (int k = 0; k < ni; ++k) v[k] = full[sys.inodes[k]];
        return v;
    };
    auto extend = [&](const Eigen::VectorXd& inner) {
        Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < ni; ++k) full[sys.inodes[k]] = inner[k];
        return full;
    };

    // Discrete torsion field: A T = M 1 on interior nodes.
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd load1 = restrict_interior(sys.M * ones);
    Eigen::VectorXd T = cg.solve(load1);
    if (cg.info() != Eigen::Success) throw NonConvergence("torsion solve failed");
    double maxT = T.maxCoeff();
    if (!(maxT > 0.0)) throw NonPositivity("discrete torsion is not positive");

    // c0^(1-beta) >= maxT^beta makes c0 * T a discrete supersolution.
    const double c0 = 2.0 * std::pow(maxT, cfg.beta / (1.0 - cfg.beta));
    Eigen::VectorXd phi = extend(c0 * T);

    SolveTrace local;
    SolveTrace& tr = trace ? *trace : local;
    tr = SolveTrace{};

    Eigen::VectorXd phi_int = restrict_interior(phi);
    double change = 1e300;
    for (int k = 0; k < cfg.max_iter; ++k) {
        Eigen::VectorXd b = restrict_interior(sys.M * detail::nodal_power(phi, cfg.beta));
        Eigen::VectorXd next = cg.solveWithGuess(b, phi_int);
        if (cg.info() != Eigen::Success) throw NonConvergence("linear solve failed");

        double sup = next.cwiseAbs().maxCoeff();
        double up = (next - phi_int).maxCoeff();
        if (up > 1e-10 * sup) tr.monotone = false;
        change = (next - phi_int).cwiseAbs().maxCoeff() / std::max(sup, 1e-300);
        tr.sup_change.push_back(change);
        tr.iterations = k + 1;
        phi_int = next;
        phi = extend(phi_int);
        if (change <= cfg.fp_tol) break;
    }
    tr.final_change = change;
    if (change > cfg.fp_tol)
        throw NonConvergence("fixed point did not reach fp_tol within max_iter");

    Eigen::VectorXd res =
        sys.A_ii * phi_int - restrict_interior(sys.M * detail::nodal_power(phi, cfg.beta));
    double bscale = restrict_interior(sys.M * detail::nodal_power(phi, cfg.beta))
                        .cwiseAbs().maxCoeff();
    tr.final_residual = res.cwiseAbs().maxCoeff() / std::max(bscale, 1e-300);

    if (phi_int.minCoeff() <= 0.0)
        throw NonPositivity("interior solution is not strictly positive");

    ScalarField field;
    field.mesh = mesh;
    field.beta = cfg.beta;
    field.values.assign(phi.data(), phi.data() + n);
    return field;
}

/// Discrete torsion field: A T = M 1 with zero boundary values. Solves the
/// beta = 0 limit of the sub-linear problem; used for calibration and as the
/// supersolution template.
inline ScalarField solve_torsion(const Mesh& mesh, const SolverConfig& cfg) {
    detail::P1System sys = detail::assemble_p1(mesh);
    const int n = static_cast<int>(mesh.nodes.size());
    const int ni = static_cast<int>(sys.inodes.size());
    if (ni == 0) throw MeshFailure("mesh has no interior nodes; decrease mesh_h");

    Eigen::ConjugateGradient<detail::SpMat, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>> cg;
    cg.setTolerance(cfg.lin_tol);
    cg.setMaxIterations(4 * ni + 200);
    cg.compute(sys.A_ii);
    Eigen::VectorXd load(ni);
    Eigen::VectorXd m1 = sys.M * Eigen::VectorXd::Ones(n);
    for (int k = 0; k < ni; ++k) load[k] = m1[sys.inodes[k]];
    Eigen::VectorXd T = cg.solve(load);
    if (cg.info() != Eigen::Success) throw NonConvergence("torsion solve failed");

    ScalarField field;
    field.mesh = mesh;
    field.beta = 0.0;
    field.values.assign(n, 0.0);
    for (int k = 0; k < ni; ++k) field.values[sys.inodes[k]] = T[k];
    return field;
}

/// P1 interpolation; the point must lie in the closed domain.
inline double interpolate(const ScalarField& field, const PointLocator& loc, Vec2 p) {
    std::array<double, 3> bary{};
    int t = loc.find(p, &bary);
    if (t < 0) throw GeometryError("interpolation point lies outside the mesh");
    const auto& tri = field.mesh.triangles[t];
    return bary[0] * field.values[tri[0]] + bary[1] * field.values[tri[1]] +
           bary[2] * field.values[tri[2]];
}

// ---------------------------------------------------------------------------
// A-priori bounds
// ---------------------------------------------------------------------------

struct FieldStats {
    double sup_phi = 0.0;
    double sup_grad = 0.0;
    double sup_bound = 0.0;  // (e^{2R} - 1)^{1/(1-beta)}
    double grad_bound = 0.0; // sup_bound^beta * R / 2
    bool bounds_ok = false;
};

inline FieldStats field_stats(const ScalarField& field, const ConvexBody& body) {
    FieldStats st;
    for (double v : field.values) st.sup_phi = std::max(st.sup_phi, v);
    for (const auto& t : field.mesh.triangles) {
        Vec2 p[3] = {field.mesh.nodes[t[0]], field.mesh.nodes[t[1]], field.mesh.nodes[t[2]]};
        double area2 = cross(p[1] - p[0], p[2] - p[0]);
        Vec2 g{0, 0};
        for (int k = 0; k < 3; ++k) {
            Vec2 d = p[(k + 2) % 3] - p[(k + 1) % 3];
            g += field.values[t[k]] * Vec2{-d.y, d.x} * (1.0 / area2);
        }
        st.sup_grad = std::max(st.sup_grad, norm(g));
    }
    double R = enclosing_ball(body).second;
    st.sup_bound = std::pow(std::exp(2.0 * R) - 1.0, 1.0 / (1.0 - field.beta));
    st.grad_bound = 0.5 * std::pow(st.sup_bound, field.beta) * R;
    st.bounds_ok = st.sup_phi <= st.sup_bound * (1.0 + 1e-9) &&
                   st.sup_grad <= st.grad_bound * (1.0 + 1e-9);
    return st;
}

} // namespace minklab
