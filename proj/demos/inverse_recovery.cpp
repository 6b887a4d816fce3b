#include <minklab/io.hpp>

#include <cstdio>

// Inverse problem demo: prescribe the uniform measure of the unit ball and
// recover the ball, then do the same for an asymmetric body from its own
// computed measure.

int main() {
    using namespace minklab;

    SurfaceMeasure uniform = uniform_measure(64);
    double mass = kTwoPi * pinned::disk_boundary_slope * pinned::disk_boundary_slope;
    for (double& w : uniform.weights) w *= mass / kTwoPi;

    MinkowskiConfig cfg;
    cfg.pde.mesh_h = 0.04;
    MinkowskiResult ball = solve_minkowski(uniform, cfg);
    save_solution(ball, "ball_solution.json");
    std::printf("uniform target: %zu vertices, lambda %.6f, rescale %.4f, "
                "residual %.4f, %d steps\n",
                ball.body.vertices.size(), ball.lambda, ball.rescale_t,
                ball.residual, ball.iterations);
    std::printf("  distance to the unit ball %.5f\n",
                hausdorff_distance(ball.body, disk_body()));

    ConvexBody bean = recenter(random_convex_body(7)).body;
    SolverConfig gen;
    gen.mesh_h = 0.03;
    ForwardResult fwd = run_forward(bean, gen, 64);
    MinkowskiResult back = solve_minkowski(fwd.mu, cfg);
    save_solution(back, "bean_solution.json");
    std::printf("computed target: residual %.4f, %d steps\n", back.residual,
                back.iterations);
    std::printf("  distance to the original body %.5f (diameter %.3f)\n",
                hausdorff_distance(back.body, bean), diameter(bean));
    return 0;
}
