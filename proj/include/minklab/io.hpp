#pragma once

#include "minkowski.hpp"
#include "radial.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace minklab {

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------
//
// body     json  {"vertices": [[x, y], ...]}            counterclockwise hull
// support  json  {"directions": M, "values": [...]}     values on the grid
// measure  json  {"directions": M, "weights": [...]}    nonnegative weights
// solution json  {"vertices", "lambda", "rescale_t", "residual",
//                 "iterations", "trace_F", "trace_residual"}
// field    csv   x,y,phi                                one row per mesh node
// radial   csv   r,phi                                  uniform profile
//
// All json writers emit shortest round-trip doubles, so saving and loading
// reproduces values bit for bit.

struct IoError final : Error {
    explicit IoError(const std::string& w) : Error(ErrorKind::invalid_input, w) {}
};

namespace detail {

inline nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw IoError("malformed json in " + path);
    return j;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    out.close();
    if (!out) throw IoError("failed writing " + path);
}

inline double json_number(const nlohmann::json& j, const char* key,
                          const std::string& path) {
    if (!j.contains(key) || !j[key].is_number())
        throw IoError(std::string("missing numeric field '") + key + "' in " + path);
    return j[key].get<double>();
}

inline std::vector<double> json_number_array(const nlohmann::json& j, const char* key,
                                             const std::string& path) {
    if (!j.contains(key) || !j[key].is_array())
        throw IoError(std::string("missing array field '") + key + "' in " + path);
    std::vector<double> out;
    out.reserve(j[key].size());
    for (const auto& v : j[key]) {
        if (!v.is_number())
            throw IoError(std::string("non-numeric entry under '") + key + "' in " + path);
        out.push_back(v.get<double>());
    }
    return out;
}

inline std::vector<Vec2> json_points(const nlohmann::json& j, const char* key,
                                     const std::string& path) {
    if (!j.contains(key) || !j[key].is_array())
        throw IoError(std::string("missing array field '") + key + "' in " + path);
    std::vector<Vec2> pts;
    pts.reserve(j[key].size());
    for (const auto& v : j[key]) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw IoError(std::string("entries under '") + key +
                          "' must be [x, y] pairs in " + path);
        pts.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return pts;
}

inline nlohmann::json points_json(const std::vector<Vec2>& pts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Vec2& p : pts) arr.push_back({p.x, p.y});
    return arr;
}

} // namespace detail

inline void save_body(const ConvexBody& body, const std::string& path) {
    nlohmann::json j;
    j["vertices"] = detail::points_json(body.vertices);
    detail::write_text(path, j.dump(2) + "\n");
}

inline ConvexBody load_body(const std::string& path) {
    nlohmann::json j = detail::read_json(path);
    return make_body(detail::json_points(j, "vertices", path));
}

inline void save_support(const SupportVector& sv, const std::string& path) {
    nlohmann::json j;
    j["directions"] = sv.directions;
    j["values"] = sv.values;
    detail::write_text(path, j.dump(2) + "\n");
}

inline SupportVector load_support(const std::string& path) {
    nlohmann::json j = detail::read_json(path);
    int M = static_cast<int>(detail::json_number(j, "directions", path));
    std::vector<double> values = detail::json_number_array(j, "values", path);
    if (M < 3 || static_cast<int>(values.size()) != M)
        throw IoError("support length disagrees with 'directions' in " + path);
    return SupportVector{M, std::move(values)};
}

inline void save_measure(const SurfaceMeasure& mu, const std::string& path) {
    nlohmann::json j;
    j["directions"] = mu.directions;
    j["weights"] = mu.weights;
    detail::write_text(path, j.dump(2) + "\n");
}

inline SurfaceMeasure load_measure(const std::string& path) {
    nlohmann::json j = detail::read_json(path);
    int M = static_cast<int>(detail::json_number(j, "directions", path));
    return make_measure(M, detail::json_number_array(j, "weights", path));
}

inline void save_solution(const MinkowskiResult& res, const std::string& path) {
    nlohmann::json j;
    j["vertices"] = detail::points_json(res.body.vertices);
    j["lambda"] = res.lambda;
    j["rescale_t"] = res.rescale_t;
    j["residual"] = res.residual;
    j["iterations"] = res.iterations;
    j["trace_F"] = res.trace_F;
    j["trace_residual"] = res.trace_residual;
    detail::write_text(path, j.dump(2) + "\n");
}

inline void save_field(const ScalarField& field, const std::string& path) {
    std::ostringstream out;
    out << "x,y,phi\n" << std::setprecision(17);
    for (std::size_t i = 0; i < field.mesh.nodes.size(); ++i) {
        const Vec2& p = field.mesh.nodes[i];
        out << p.x << ',' << p.y << ',' << field.values[i] << '\n';
    }
    detail::write_text(path, out.str());
}

inline void save_radial(const RadialSolution& sol, const std::string& path) {
    std::ostringstream out;
    out << "r,phi\n" << std::setprecision(17);
    for (std::size_t i = 0; i < sol.r.size(); ++i)
        out << sol.r[i] << ',' << sol.phi[i] << '\n';
    detail::write_text(path, out.str());
}

} // namespace minklab
