#include "mildstokes/sectorial.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace mildstokes {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Gauss-Legendre nodes/weights on [-1, 1].
const double kGL16x[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
const double kGL16w[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

cx expi(double x) { return std::exp(cx(0.0, x)); }

Eigen::MatrixXcd mat_exp(const Eigen::MatrixXcd& M) {
    if (M.rows() == 1) {
        Eigen::MatrixXcd r(1, 1);
        r(0, 0) = std::exp(M(0, 0));
        return r;
    }
    return M.exp();
}

// log(1 - e^w), stable for large |Re w| of either sign.
cx log_one_minus_exp(cx w) {
    if (w.real() <= 0.0) return std::log(cx(1.0) - std::exp(w));
    return w + std::log(std::exp(-w) - cx(1.0));
}

}  // namespace

double ray_arg(cx s, double sigma) { return sigma + std::arg(s * expi(-sigma)); }

Eigen::MatrixXcd Frame::eval(cx s, double arg_s) const {
    cx ls(std::log(std::abs(s)), arg_s);
    cx scal = std::exp(-a.eval(std::abs(s), arg_s));
    return scal * mat_exp(ls * G);
}

Eigen::MatrixXcd Frame::eval_inverse(cx s, double arg_s) const {
    cx ls(std::log(std::abs(s)), arg_s);
    cx scal = std::exp(a.eval(std::abs(s), arg_s));
    return scal * mat_exp(-ls * G);
}

Eigen::MatrixXcd elementary_matrix(const FormalBlock& b, cx s, double arg_s) {
    cx s1 = s + cx(1.0);
    double arg_s1 = arg_s + std::arg(s1 * expi(-arg_s));
    cx da = b.a.eval(std::abs(s1), arg_s1) - b.a.eval(std::abs(s), arg_s);
    cx l1p = std::log(cx(1.0) + cx(1.0) / s);  // principal; 1 + 1/s is near 1
    return std::exp(da) * mat_exp(-l1p * b.G);
}

GrowthFit fit_growth(const std::vector<double>& R, const std::vector<double>& absval,
                     double mu_tol, double floor) {
    if (R.size() != absval.size()) throw InsufficientSamples();
    std::vector<double> rr, vv;
    for (size_t i = 0; i < R.size(); ++i) {
        if (absval[i] > floor && std::isfinite(absval[i])) {
            rr.push_back(R[i]);
            vv.push_back(absval[i]);
        }
    }
    GrowthFit out;
    if (rr.empty()) {
        out.cls = GrowthClass::RapidDecay;
        out.below_floor = true;
        return out;
    }
    if (rr.size() < 8) throw InsufficientSamples();
    double rmin = *std::min_element(rr.begin(), rr.end());
    double rmax = *std::max_element(rr.begin(), rr.end());
    if (rmax < 4.0 * rmin * (1.0 - 1e-12)) throw InsufficientSamples();

    // normal equations for log v = mu R + nu log R + c
    double M[3][3] = {{0}}, b[3] = {0};
    for (size_t i = 0; i < rr.size(); ++i) {
        double x[3] = {rr[i], std::log(rr[i]), 1.0};
        double y = std::log(vv[i]);
        for (int p = 0; p < 3; ++p) {
            for (int q = 0; q < 3; ++q) M[p][q] += x[p] * x[q];
            b[p] += x[p] * y;
        }
    }
    Eigen::Matrix3d A;
    Eigen::Vector3d rhs;
    for (int p = 0; p < 3; ++p) {
        rhs(p) = b[p];
        for (int q = 0; q < 3; ++q) A(p, q) = M[p][q];
    }
    Eigen::Vector3d sol = A.fullPivLu().solve(rhs);
    out.mu = sol(0);
    out.nu = sol(1);
    out.c0 = sol(2);
    double ss = 0.0;
    for (size_t i = 0; i < rr.size(); ++i) {
        double pred = out.mu * rr[i] + out.nu * std::log(rr[i]) + out.c0;
        double d = std::log(vv[i]) - pred;
        ss += d * d;
    }
    out.rms = std::sqrt(ss / static_cast<double>(rr.size()));
    out.used = static_cast<int>(rr.size());
    if (out.mu < -mu_tol)
        out.cls = GrowthClass::RapidDecay;
    else if (out.mu > mu_tol)
        out.cls = GrowthClass::Growth;
    else
        out.cls = GrowthClass::Moderate;
    return out;
}

GrowthFit classify_growth(const RaySamples& samples, double mu_tol, double floor) {
    std::vector<double> R, v;
    for (size_t i = 0; i < samples.size(); ++i) {
        R.push_back(std::abs(samples.s[i]));
        v.push_back(samples.y[i].norm());
    }
    return fit_growth(R, v, mu_tol, floor);
}

int normalization_shift(const Exponent& a, double theta, double eps, int kernel_sign) {
    cx cm = a.top();
    double R = std::max(0.0, -cm.real()) *
               std::max(std::atan(theta - eps), std::atan(theta + eps));
    // need kernel_sign * Im(c_m + 2 pi i n) < 2 pi - R, with margin
    double target = kTwoPi - R - kPi / 2.0;
    double im = kernel_sign * cm.imag();
    if (im < target) return 0;
    int n = static_cast<int>(std::ceil((im - target) / kTwoPi));
    return -kernel_sign * n;
}

namespace {

struct LambdaPointContext {
    const FormalBlock* model;  // with the normalization shift already applied
    const std::function<Eigen::VectorXcd(cx)>* f;
    cx p;
    double sigma;
    int kernel_sign;
    const QuadratureParams* qp;
};

Eigen::VectorXcd lambda_integrand(const LambdaPointContext& ctx, cx s, double arg_s, cx zeta,
                                  cx dir) {
    const Exponent& a = ctx.model->a;
    double arg_z = ray_arg(zeta, ctx.sigma);
    cx w = cx(0.0, ctx.kernel_sign * kTwoPi) * (s - zeta);
    cx scal = a.eval(std::abs(zeta), arg_z) - a.eval(std::abs(s), arg_s) - log_one_minus_exp(w);
    if (scal.real() > 700.0) throw QuadratureNoConvergence();
    cx ls(std::log(std::abs(s)), arg_s);
    cx lz(std::log(std::abs(zeta)), arg_z);
    Eigen::MatrixXcd pow = mat_exp((ls - lz) * ctx.model->G);
    return std::exp(scal) * (pow * (*ctx.f)(zeta)) * dir;
}

struct PanelSum {
    Eigen::VectorXcd value;
    double err;
    double mag;
};

PanelSum gl_panel(const LambdaPointContext& ctx, cx s, double arg_s, double T0, double T1) {
    // one 16-point evaluation and its bisected refinement as error control
    int r = ctx.model->rank();
    Eigen::VectorXcd whole = Eigen::VectorXcd::Zero(r);
    cx dir = (s + cx(0.5)) - ctx.p;
    for (int i = 0; i < 16; ++i) {
        double T = 0.5 * (T0 + T1) + 0.5 * (T1 - T0) * kGL16x[i];
        cx zeta = ctx.p + T * dir;
        whole += 0.5 * (T1 - T0) * kGL16w[i] * lambda_integrand(ctx, s, arg_s, zeta, dir);
    }
    Eigen::VectorXcd halves = Eigen::VectorXcd::Zero(r);
    for (int h = 0; h < 2; ++h) {
        double a0 = h == 0 ? T0 : 0.5 * (T0 + T1);
        double a1 = h == 0 ? 0.5 * (T0 + T1) : T1;
        for (int i = 0; i < 16; ++i) {
            double T = 0.5 * (a0 + a1) + 0.5 * (a1 - a0) * kGL16x[i];
            cx zeta = ctx.p + T * dir;
            halves += 0.5 * (a1 - a0) * kGL16w[i] * lambda_integrand(ctx, s, arg_s, zeta, dir);
        }
    }
    PanelSum out;
    out.value = halves;
    out.err = (whole - halves).norm();
    out.mag = halves.norm();
    return out;
}

struct PointResult {
    Eigen::VectorXcd value;
    double err;
};

PointResult lambda_point(const LambdaPointContext& ctx, cx s) {
    double arg_s = ray_arg(s, ctx.sigma);
    int r = ctx.model->rank();
    Eigen::VectorXcd total = Eigen::VectorXcd::Zero(r);
    double err = 0.0;
    double scale = (*ctx.f)(s).norm() + 1e-280;
    double peak = 0.0;
    int panels_used = 0;

    auto integrate = [&](double T0, double T1) {
        // adaptive bisection with an explicit stack
        std::vector<std::array<double, 3>> stack;  // T0, T1, depth
        stack.push_back({T0, T1, 0.0});
        while (!stack.empty()) {
            auto [a0, a1, d] = stack.back();
            stack.pop_back();
            if (++panels_used > ctx.qp->max_panels) throw QuadratureNoConvergence();
            PanelSum ps = gl_panel(ctx, s, arg_s, a0, a1);
            double tol = ctx.qp->panel_rel_tol * std::max(scale, std::max(peak, ps.mag));
            if (ps.err <= tol || d >= ctx.qp->max_depth) {
                total += ps.value;
                err += ps.err;
                peak = std::max(peak, ps.mag);
            } else {
                double mid = 0.5 * (a0 + a1);
                stack.push_back({a0, mid, d + 1.0});
                stack.push_back({mid, a1, d + 1.0});
            }
        }
    };

    // l0: T in (0, 1]; fixed panels with refinement toward the pole crossing
    const double cuts[6] = {0.0, 0.5, 0.8, 0.92, 0.97, 1.0};
    for (int i = 0; i + 1 < 6; ++i) integrate(cuts[i], cuts[i + 1]);

    // l1: geometric panels until the contributions die off
    double T = 1.0, width = 0.03;
    int quiet = 0;
    while (quiet < 3) {
        if (panels_used > ctx.qp->max_panels) throw QuadratureNoConvergence();
        double T1 = T + width;
        double before = peak;
        Eigen::VectorXcd saved = total;
        integrate(T, T1);
        double contrib = (total - saved).norm();
        if (contrib < ctx.qp->tail_cutoff * std::max(before, scale))
            ++quiet;
        else
            quiet = 0;
        T = T1;
        width *= 1.4;
        if (T > 1e7) throw QuadratureNoConvergence();
    }

    PointResult out;
    out.value = -(*ctx.f)(s) + total;
    out.err = err;
    return out;
}

LambdaResult lambda_run(const FormalBlock& model, const std::function<Eigen::VectorXcd(cx)>& f,
                        const RayGrid& grid, const QuadratureParams& qp, bool parallel) {
    // anchors along the ray, pulled in if the grid starts close to the origin
    double cr = std::min(qp.c_radius, std::max(2.0, grid.r0 - 6.0));
    cx dirv = expi(grid.sigma);
    cx p = (cr + qp.p_advance) * dirv;

    // force a uniform pole-row crossing direction over the whole grid
    double im_min = 1e300, im_max = -1e300;
    for (int k = 0; k < grid.n; ++k) {
        double im = grid.point(k).imag();
        im_min = std::min(im_min, im);
        im_max = std::max(im_max, im + 0.0);
    }
    int kernel_sign;
    if (p.imag() < im_min - 0.5) {
        kernel_sign = +1;
    } else if (p.imag() > im_max + 0.5) {
        kernel_sign = -1;
    } else {
        p = cx(p.real(), im_min - qp.perp_offset);
        kernel_sign = +1;
    }

    FormalBlock shifted = model;
    int applied = 0;
    {
        auto canon = canonicalize(model.a).first;
        int n = normalization_shift(canon, std::abs(grid.sigma), qp.sector_eps, kernel_sign);
        if (n != 0 && !qp.auto_shift) throw NormalizationViolated();
        shifted.a = shift(canon, n);
        applied = n;
    }

    LambdaPointContext ctx{&shifted, &f, p, grid.sigma, kernel_sign, &qp};

    LambdaResult res;
    res.applied_shift = applied;
    res.anchor_p = p;
    res.out.sigma = grid.sigma;
    res.out.s.resize(static_cast<size_t>(grid.n));
    res.out.y.resize(static_cast<size_t>(grid.n));
    res.out.y1.resize(static_cast<size_t>(grid.n));
    std::vector<double> errs(static_cast<size_t>(grid.n), 0.0);

    std::exception_ptr eptr = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (int k = 0; k < grid.n; ++k) {
        try {
            cx s = grid.point(k);
            PointResult a = lambda_point(ctx, s);
            PointResult b = lambda_point(ctx, s + cx(1.0));
            res.out.s[static_cast<size_t>(k)] = s;
            res.out.y[static_cast<size_t>(k)] = a.value;
            res.out.y1[static_cast<size_t>(k)] = b.value;
            errs[static_cast<size_t>(k)] = a.err + b.err;
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!eptr) eptr = std::current_exception();
        }
    }
    if (eptr) std::rethrow_exception(eptr);
    for (double e : errs) res.err_estimate = std::max(res.err_estimate, e);
    return res;
}

}  // namespace

LambdaResult lambda_apply(const FormalBlock& model, const std::function<Eigen::VectorXcd(cx)>& f,
                          const RayGrid& grid, const QuadratureParams& qp, ExecPolicy pol) {
    return lambda_run(model, f, grid, qp, pol == ExecPolicy::OpenMP);
}

LambdaResult lambda_apply_serial(const FormalBlock& model,
                                 const std::function<Eigen::VectorXcd(cx)>& f,
                                 const RayGrid& grid, const QuadratureParams& qp) {
    return lambda_run(model, f, grid, qp, false);
}

double residual(const DiffSystem& sys, const RaySamples& samples) {
    if (!samples.has_companions()) throw MissingCompanions();
    double worst = 0.0;
    for (size_t k = 0; k < samples.size(); ++k) {
        cx s = samples.s[k];
        double arg_s = ray_arg(s, samples.sigma);
        Eigen::MatrixXcd A = sys.A.eval(cx(1.0) / s, -arg_s);
        Eigen::MatrixXcd d = A * samples.y1[k] - samples.y[k];
        double scale = samples.y[k].norm();
        if (scale < 1e-280) scale = 1e-280;
        worst = std::max(worst, d.norm() / scale);
    }
    return worst;
}

double residual_against(const DiffSystem& sys, const RaySamples& samples,
                        const std::function<Eigen::VectorXcd(cx)>& f) {
    if (!samples.has_companions()) throw MissingCompanions();
    double worst = 0.0;
    for (size_t k = 0; k < samples.size(); ++k) {
        cx s = samples.s[k];
        double arg_s = ray_arg(s, samples.sigma);
        Eigen::MatrixXcd A = sys.A.eval(cx(1.0) / s, -arg_s);
        Eigen::VectorXcd fv = f(s);
        Eigen::MatrixXcd d = A * samples.y1[k] - samples.y[k] - fv;
        double scale = std::max(fv.norm(), 1e-280);
        worst = std::max(worst, d.norm() / scale);
    }
    return worst;
}

namespace {

// W(s) = H(1/s) * blockdiag(Y_i(s)), the asymptotically normalized frame.
Eigen::MatrixXcd gauge_frame(const FormalReduction& red, cx s, double arg_s) {
    int n = red.datum.rank();
    Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(n, n);
    int off = 0;
    for (const auto& blk : red.datum.blocks) {
        Frame fr{with_ramification(blk.a, red.datum.ram), blk.G};
        W.block(off, off, blk.rank(), blk.rank()) = fr.eval(s, arg_s);
        off += blk.rank();
    }
    Eigen::MatrixXcd H = red.gauge.eval(cx(1.0) / s, -arg_s);
    return H * W;
}

// Re(a_i - a_j) must not decrease from the sample to the seed for the
// backward recurrence on block i to be contamination-safe.
bool chain_stable(const FormalDatum& fd, size_t i, cx s, double arg_s, cx seed, double arg_seed) {
    for (size_t j = 0; j < fd.blocks.size(); ++j) {
        if (j == i) continue;
        Exponent d = fd.blocks[i].a - fd.blocks[j].a;
        double here = d.eval(std::abs(s), arg_s).real();
        double far = d.eval(std::abs(seed), arg_seed).real();
        if (far < here - 1e-9) return false;
    }
    return true;
}

SectorialSolution flat_run(const DiffSystem& sys, const FormalReduction& red, const Arc& arc,
                           const FlatParams& fp, bool parallel) {
    SectorialSolution sol;
    sol.arc = arc;
    sol.datum = red.datum;

    std::vector<double> sigmas = fp.sigmas;
    if (sigmas.empty()) sigmas.push_back(0.5 * (arc.sigma_lo() + arc.sigma_hi()));

    // keep sampling rays clear of Stokes directions of exponent pairs
    std::vector<double> forbidden;
    for (size_t i = 0; i < red.datum.blocks.size(); ++i)
        for (size_t j = 0; j < red.datum.blocks.size(); ++j) {
            if (i == j) continue;
            Exponent d = red.datum.blocks[i].a - red.datum.blocks[j].a;
            if (d.is_zero()) continue;
            for (const auto& sd : stokes_directions(red.datum.blocks[i].a, red.datum.blocks[j].a))
                forbidden.push_back(sd.sigma);
        }
    for (double& sg : sigmas) {
        for (double f0 : forbidden) {
            double d = std::remainder(sg - f0, kTwoPi);
            if (std::abs(d) < fp.stokes_clearance) {
                if (!fp.one_sided_nudge) throw StokesLineInArc();
                sg += (d >= 0 ? 1.0 : -1.0) * (fp.stokes_clearance - std::abs(d) + 1e-9);
                sol.nudged_ray = true;
            }
        }
    }

    const int n = sys.rank();
    for (double sg : sigmas) {
        RayGrid grid{sg, fp.r0, fp.r1, fp.n};
        RaySamples rs;
        rs.sigma = sg;
        rs.s.resize(static_cast<size_t>(fp.n));
        rs.y.resize(static_cast<size_t>(fp.n));
        rs.y1.resize(static_cast<size_t>(fp.n));

        // chain direction that moves outward
        double cd = std::cos(sg) >= 0.0 ? 1.0 : -1.0;

        std::exception_ptr eptr = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
        for (int k = 0; k < fp.n; ++k) {
            try {
                cx s = grid.point(k);
                for (int comp = 0; comp < 2; ++comp) {
                    cx base = s + cx(static_cast<double>(comp));
                    double arg_b = ray_arg(base, sg);
                    Eigen::MatrixXcd W(n, n);
                    // per block: backward chain from the asymptotic seed when
                    // stable, otherwise the direct gauge evaluation
                    int off = 0;
                    for (size_t bi = 0; bi < red.datum.blocks.size(); ++bi) {
                        int r = red.datum.blocks[bi].rank();
                        cx seed_pt = base + cx(cd * fp.chain);
                        double arg_seed = ray_arg(seed_pt, sg);
                        bool stable =
                            fp.chain > 0 && chain_stable(red.datum, bi, base, arg_b, seed_pt, arg_seed);
                        Eigen::MatrixXcd cols;
                        if (stable) {
                            Eigen::MatrixXcd cur =
                                gauge_frame(red, seed_pt, arg_seed).block(0, off, n, r);
                            if (cd > 0) {
                                // y(pt) = A(pt) y(pt+1), marching down to base
                                for (int step = fp.chain - 1; step >= 0; --step) {
                                    cx pt = base + cx(static_cast<double>(step));
                                    double arg_pt = ray_arg(pt, sg);
                                    cur = sys.A.eval(cx(1.0) / pt, -arg_pt) * cur;
                                }
                            } else {
                                // y(pt+1) = A(pt)^{-1} y(pt), marching up to base
                                for (int step = fp.chain; step >= 1; --step) {
                                    cx pt = base - cx(static_cast<double>(step));
                                    double arg_pt = ray_arg(pt, sg);
                                    cur = sys.A.eval(cx(1.0) / pt, -arg_pt)
                                              .partialPivLu()
                                              .solve(cur);
                                }
                            }
                            cols = cur;
                        } else {
                            cols = gauge_frame(red, base, arg_b).block(0, off, n, r);
                        }
                        W.block(0, off, n, r) = cols;
                        off += r;
                    }
                    if (comp == 0)
                        rs.y[static_cast<size_t>(k)] = W;
                    else
                        rs.y1[static_cast<size_t>(k)] = W;
                }
                rs.s[static_cast<size_t>(k)] = s;
            } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
                if (!eptr) eptr = std::current_exception();
            }
        }
        if (eptr) std::rethrow_exception(eptr);
        sol.max_residual = std::max(sol.max_residual, residual(sys, rs));
        sol.rays.push_back(std::move(rs));
    }
    return sol;
}

}  // namespace

SectorialSolution flat_sections(const DiffSystem& sys, const FormalReduction& red, const Arc& arc,
                                const FlatParams& fp, ExecPolicy pol) {
    return flat_run(sys, red, arc, fp, pol == ExecPolicy::OpenMP);
}

SectorialSolution flat_sections_serial(const DiffSystem& sys, const FormalReduction& red,
                                       const Arc& arc, const FlatParams& fp) {
    return flat_run(sys, red, arc, fp, false);
}

SectorialSolution flat_sections(const DiffSystem& sys, const Arc& arc, const FlatParams& fp,
                                ExecPolicy pol) {
    return flat_sections(sys, formal_reduce(sys), arc, fp, pol);
}

void write_ray_csv(const RaySamples& samples, const std::string& path) {
    std::ofstream os(path);
    os.precision(17);
    if (samples.size() == 0) return;
    int rows = static_cast<int>(samples.y[0].rows());
    int cols = static_cast<int>(samples.y[0].cols());
    os << "re_s,im_s";
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) os << ",re_y" << i << j << ",im_y" << i << j;
    os << "\n";
    for (size_t k = 0; k < samples.size(); ++k) {
        os << samples.s[k].real() << "," << samples.s[k].imag();
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                os << "," << samples.y[k](i, j).real() << "," << samples.y[k](i, j).imag();
        os << "\n";
    }
}

}  // namespace mildstokes
