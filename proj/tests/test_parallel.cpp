#include <doctest.h>

#include "mildstokes/sectorial.hpp"

using namespace mildstokes;

// The OpenMP kernels must agree bitwise with the serial reference: every
// sample point is computed independently with a fixed reduction order.

TEST_CASE("lambda kernel: serial reference vs OpenMP") {
    FormalBlock model{Exponent::linear(cx(-1.0)), Eigen::MatrixXcd::Zero(1, 1)};
    auto f = [](cx s) {
        Eigen::VectorXcd v(1);
        v(0) = std::exp(-1.1 * s) / s;
        return v;
    };
    RayGrid grid{0.35, 10.0, 30.0, 17};
    QuadratureParams qp;
    LambdaResult a = lambda_apply_serial(model, f, grid, qp);
    LambdaResult b = lambda_apply(model, f, grid, qp, ExecPolicy::OpenMP);
    REQUIRE(a.out.size() == b.out.size());
    for (size_t k = 0; k < a.out.size(); ++k) {
        CHECK((a.out.y[k] - b.out.y[k]).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.out.y1[k] - b.out.y1[k]).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(a.err_estimate == b.err_estimate);
}

TEST_CASE("flat sections: serial reference vs OpenMP") {
    DiffSystem sys = b_alpha(cx(0.3, 0.2));
    FormalReduction red = formal_reduce(sys);
    FlatParams fp;
    fp.sigmas = {0.2, -0.4};
    fp.r0 = 9.0;
    fp.r1 = 33.0;
    fp.n = 25;
    Arc arc(-0.6, 0.6);
    SectorialSolution a = flat_sections_serial(sys, red, arc, fp);
    SectorialSolution b = flat_sections(sys, red, arc, fp, ExecPolicy::OpenMP);
    REQUIRE(a.rays.size() == b.rays.size());
    for (size_t r = 0; r < a.rays.size(); ++r)
        for (size_t k = 0; k < a.rays[r].size(); ++k) {
            CHECK((a.rays[r].y[k] - b.rays[r].y[k]).cwiseAbs().maxCoeff() == 0.0);
            CHECK((a.rays[r].y1[k] - b.rays[r].y1[k]).cwiseAbs().maxCoeff() == 0.0);
        }
    CHECK(a.max_residual == b.max_residual);
}
