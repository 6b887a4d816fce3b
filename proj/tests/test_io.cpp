#include <catch2/catch_amalgamated.hpp>

#include <minklab/io.hpp>

#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>

using namespace minklab;

namespace {

struct TempDir {
    std::filesystem::path dir;
    TempDir() {
        dir = std::filesystem::temp_directory_path() /
              ("minklab_io_" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir);
    }
    ~TempDir() { std::filesystem::remove_all(dir); }
    std::string operator()(const char* name) const { return (dir / name).string(); }
};

void write_raw(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace

TEST_CASE("body json round-trips bit for bit") {
    TempDir tmp;
    ConvexBody body = random_convex_body(5);
    save_body(body, tmp("body.json"));
    ConvexBody back = load_body(tmp("body.json"));
    REQUIRE(back.vertices.size() == body.vertices.size());
    for (std::size_t i = 0; i < body.vertices.size(); ++i) {
        REQUIRE(back.vertices[i].x == body.vertices[i].x);
        REQUIRE(back.vertices[i].y == body.vertices[i].y);
    }
    REQUIRE(back.area == body.area);
}

TEST_CASE("support json round-trips") {
    TempDir tmp;
    SupportVector sv = sample_support(random_convex_body(11), 48);
    save_support(sv, tmp("sv.json"));
    SupportVector back = load_support(tmp("sv.json"));
    REQUIRE(back.directions == 48);
    REQUIRE(back.values == sv.values);
}

TEST_CASE("measure json round-trips and validates on load") {
    TempDir tmp;
    SurfaceMeasure mu = uniform_measure(32);
    mu.weights[3] = 0.0;
    save_measure(mu, tmp("mu.json"));
    SurfaceMeasure back = load_measure(tmp("mu.json"));
    REQUIRE(back.directions == 32);
    REQUIRE(back.weights == mu.weights);

    write_raw(tmp("neg.json"), "{\"directions\": 4, \"weights\": [1, -1, 1, 1]}");
    REQUIRE_THROWS_AS(load_measure(tmp("neg.json")), GeometryError);
}

TEST_CASE("malformed inputs raise invalid input errors") {
    TempDir tmp;
    REQUIRE_THROWS_AS(load_body(tmp("missing.json")), IoError);

    write_raw(tmp("garbage.json"), "{not json");
    REQUIRE_THROWS_AS(load_body(tmp("garbage.json")), IoError);

    write_raw(tmp("nokey.json"), "{\"points\": [[0,0],[1,0],[0,1]]}");
    REQUIRE_THROWS_AS(load_body(tmp("nokey.json")), IoError);

    write_raw(tmp("badpair.json"), "{\"vertices\": [[0,0],[1,0],[0,1,9]]}");
    REQUIRE_THROWS_AS(load_body(tmp("badpair.json")), IoError);

    write_raw(tmp("string.json"), "{\"vertices\": [[0,0],[1,0],[\"a\",1]]}");
    REQUIRE_THROWS_AS(load_body(tmp("string.json")), IoError);

    write_raw(tmp("short.json"), "{\"directions\": 8, \"values\": [1, 2]}");
    REQUIRE_THROWS_AS(load_support(tmp("short.json")), IoError);

    write_raw(tmp("mixed.json"), "{\"directions\": 3, \"weights\": [1, true, 1]}");
    REQUIRE_THROWS_AS(load_measure(tmp("mixed.json")), IoError);

    // Degenerate but well-formed geometry is the geometry layer's call.
    write_raw(tmp("flat.json"), "{\"vertices\": [[0,0],[1,0],[2,0]]}");
    REQUIRE_THROWS_AS(load_body(tmp("flat.json")), Error);
}

TEST_CASE("field and radial csv have stable shape") {
    TempDir tmp;
    SolverConfig cfg{0.5, 0.1, 1e-8, 200, 1e-10};
    ScalarField field = solve_sublinear(triangulate(square_body(0.5), cfg), cfg);
    save_field(field, tmp("field.csv"));
    std::string text = slurp(tmp("field.csv"));
    REQUIRE(text.rfind("x,y,phi\n", 0) == 0);
    std::size_t rows = std::count(text.begin(), text.end(), '\n');
    REQUIRE(rows == field.mesh.nodes.size() + 1);

    RadialSolution sol = radial_oracle(1.0, 2, 0.5);
    save_radial(sol, tmp("radial.csv"));
    std::string rtext = slurp(tmp("radial.csv"));
    REQUIRE(rtext.rfind("r,phi\n", 0) == 0);
    REQUIRE(std::count(rtext.begin(), rtext.end(), '\n') == sol.r.size() + 1);
}

TEST_CASE("solution json carries the full report") {
    TempDir tmp;
    MinkowskiResult res;
    res.body = square_body(1.0);
    res.lambda = 0.0078;
    res.rescale_t = 2.0;
    res.residual = 1.5e-3;
    res.iterations = 12;
    res.trace_F = {1.0, 2.0};
    res.trace_residual = {0.5, 0.1};
    save_solution(res, tmp("sol.json"));

    nlohmann::json j = nlohmann::json::parse(slurp(tmp("sol.json")));
    REQUIRE(j["lambda"].get<double>() == 0.0078);
    REQUIRE(j["rescale_t"].get<double>() == 2.0);
    REQUIRE(j["iterations"].get<int>() == 12);
    REQUIRE(j["vertices"].size() == 4);
    REQUIRE(j["trace_F"].size() == 2);
    REQUIRE(j["trace_residual"][1].get<double>() == 0.1);
}
