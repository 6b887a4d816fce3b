#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace minklab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Coarse classification used by the CLI to pick an exit code.
enum class ErrorKind {
    invalid_input,  // exit 2
    numerical,      // exit 3
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct GeometryError final : Error {
    explicit GeometryError(const std::string& w) : Error(ErrorKind::invalid_input, w) {}
};
struct EmptyInterior final : Error {
    explicit EmptyInterior(const std::string& w) : Error(ErrorKind::invalid_input, w) {}
};
struct Unbounded final : Error {
    explicit Unbounded(const std::string& w) : Error(ErrorKind::invalid_input, w) {}
};
struct ZeroMassMeasure final : Error {
    explicit ZeroMassMeasure(const std::string& w) : Error(ErrorKind::invalid_input, w) {}
};
struct NonpositiveScale final : Error {
    explicit NonpositiveScale(const std::string& w) : Error(ErrorKind::invalid_input, w) {}
};
struct GridMismatch final : Error {
    explicit GridMismatch(const std::string& w) : Error(ErrorKind::invalid_input, w) {}
};
struct CentroidViolation final : Error {
    explicit CentroidViolation(const std::string& w) : Error(ErrorKind::invalid_input, w) {}
};
struct DegenerateMeasure final : Error {
    explicit DegenerateMeasure(const std::string& w) : Error(ErrorKind::invalid_input, w) {}
};
struct MeshFailure final : Error {
    explicit MeshFailure(const std::string& w) : Error(ErrorKind::numerical, w) {}
};
struct NonConvergence final : Error {
    explicit NonConvergence(const std::string& w) : Error(ErrorKind::numerical, w) {}
};
struct NonPositivity final : Error {
    explicit NonPositivity(const std::string& w) : Error(ErrorKind::numerical, w) {}
};
struct BracketFailure final : Error {
    explicit BracketFailure(const std::string& w) : Error(ErrorKind::numerical, w) {}
};
struct CollapseDetected final : Error {
    explicit CollapseDetected(const std::string& w) : Error(ErrorKind::numerical, w) {}
};

// ---------------------------------------------------------------------------
// Plane vectors and directions
// ---------------------------------------------------------------------------

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

/// Unit vector for a polar angle.
inline Vec2 unit_vector(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Angle of v in [0, 2*pi).
inline double angle_of(Vec2 v) {
    double a = std::atan2(v.y, v.x);
    if (a < 0.0) a += kTwoPi;
    return a;
}

/// i-th direction of the uniform grid theta_i = 2*pi*i/M.
inline double grid_angle(int i, int M) { return kTwoPi * static_cast<double>(i) / M; }

/// Nearest grid index for an angle (mod 2*pi).
inline int snap_to_grid(double theta, int M) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    int i = static_cast<int>(std::lround(t * M / kTwoPi));
    return i % M;
}

// ---------------------------------------------------------------------------
// Atomic measure on the direction grid
// ---------------------------------------------------------------------------

/// Non-negative atomic measure on S^1: weight i sits at theta_i = 2*pi*i/M.
struct SurfaceMeasure {
    int directions = 0;
    std::vector<double> weights;

    double mass() const {
        double m = 0.0;
        for (double w : weights) m += w;
        return m;
    }
};

inline SurfaceMeasure make_measure(int M, std::vector<double> weights) {
    if (M < 1 || static_cast<int>(weights.size()) != M)
        throw GeometryError("measure weight count must equal direction count");
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw GeometryError("measure weights must be non-negative finite");
    }
    return SurfaceMeasure{M, std::move(weights)};
}

/// Uniform measure with total mass 2*pi (the arc-length measure on S^1).
inline SurfaceMeasure uniform_measure(int M) {
    return SurfaceMeasure{M, std::vector<double>(M, kTwoPi / M)};
}

// ---------------------------------------------------------------------------
// Solver configuration
// ---------------------------------------------------------------------------

struct SolverConfig {
    double beta = 0.5;      // exponent in (0,1)
    double mesh_h = 0.02;   // target boundary edge length
    double fp_tol = 1e-8;   // fixed-point sup-norm tolerance
    int max_iter = 200;     // fixed-point iteration cap
    double lin_tol = 1e-10; // linear-solve relative residual
};

inline void validate(const SolverConfig& cfg) {
    if (!(cfg.beta > 0.0 && cfg.beta < 1.0))
        throw GeometryError("beta must lie in (0,1)");
    if (!(cfg.mesh_h > 0.0)) throw GeometryError("mesh_h must be positive");
    if (!(cfg.fp_tol > 0.0 && cfg.lin_tol > 0.0))
        throw GeometryError("tolerances must be positive");
    if (cfg.max_iter < 1) throw GeometryError("max_iter must be at least 1");
}

} // namespace minklab
