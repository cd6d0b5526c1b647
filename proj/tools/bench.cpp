// Timing comparison of the serial reference kernels against the OpenMP
// variants.  Both paths run the same per-point code, so the outputs must
// agree exactly; the benchmark asserts that before reporting speedups.

#include <chrono>
#include <cstdio>

#include "mildstokes/filtration.hpp"
#include "mildstokes/special.hpp"

namespace ms = mildstokes;
using ms::cx;

namespace {

double seconds(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

double max_dev(const ms::RaySamples& x, const ms::RaySamples& y) {
    double d = 0.0;
    for (size_t k = 0; k < x.size(); ++k) d = std::max(d, (x.y[k] - y.y[k]).cwiseAbs().maxCoeff());
    return d;
}

}  // namespace

int main() {
    std::printf("%-28s %10s %10s %8s %10s\n", "kernel", "serial[s]", "openmp[s]", "speedup",
                "max dev");

    {
        ms::FormalBlock model{ms::Exponent::linear(cx(0.0)), Eigen::MatrixXcd::Zero(1, 1)};
        auto f = [](cx s) {
            Eigen::VectorXcd v(1);
            v(0) = std::exp(-s) * (1.0 + 0.3 / s);
            return v;
        };
        ms::RayGrid grid{0.25, 12.0, 44.0, 96};
        ms::QuadratureParams qp;

        auto t0 = std::chrono::steady_clock::now();
        ms::LambdaResult a = ms::lambda_apply_serial(model, f, grid, qp);
        auto t1 = std::chrono::steady_clock::now();
        ms::LambdaResult b = ms::lambda_apply(model, f, grid, qp, ms::ExecPolicy::OpenMP);
        auto t2 = std::chrono::steady_clock::now();

        double ts = seconds(t0, t1), tp = seconds(t1, t2);
        std::printf("%-28s %10.3f %10.3f %8.2f %10.2e\n", "lambda_apply (96 pts)", ts, tp,
                    ts / tp, max_dev(a.out, b.out));
    }

    {
        ms::DiffSystem sys = ms::b_alpha(cx(0.5), 16);
        ms::FormalReduction red = ms::formal_reduce(sys);
        ms::Arc arc(-0.4, 0.4);
        ms::FlatParams fp;
        fp.sigmas = {0.05};
        fp.r0 = 10.0;
        fp.r1 = 40.0;
        fp.n = 4000;
        fp.chain = 24;

        auto t0 = std::chrono::steady_clock::now();
        ms::SectorialSolution a = ms::flat_sections_serial(sys, red, arc, fp);
        auto t1 = std::chrono::steady_clock::now();
        ms::SectorialSolution b = ms::flat_sections(sys, red, arc, fp, ms::ExecPolicy::OpenMP);
        auto t2 = std::chrono::steady_clock::now();

        double ts = seconds(t0, t1), tp = seconds(t1, t2);
        std::printf("%-28s %10.3f %10.3f %8.2f %10.2e\n", "flat_sections (4000 pts)", ts, tp,
                    ts / tp, max_dev(a.rays[0], b.rays[0]));
    }

    return 0;
}
