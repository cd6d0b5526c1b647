#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mildstokes/diffmod.hpp"
#include "mildstokes/parallel.hpp"

namespace mildstokes {

/// Sample points s = R e^{i sigma} along one ray, with the matrix (or vector)
/// values attached and optional companions at s+1 for residual checks.
struct RaySamples {
    double sigma = 0.0;
    std::vector<cx> s;
    std::vector<Eigen::MatrixXcd> y;
    std::vector<Eigen::MatrixXcd> y1;  // values at s+1; empty if absent

    bool has_companions() const { return !y1.empty(); }
    size_t size() const { return s.size(); }
};

struct RayGrid {
    double sigma = 0.0;
    double r0 = 10.0;
    double r1 = 40.0;
    int n = 31;

    cx point(int k) const {
        double R = (n == 1) ? r0 : r0 + (r1 - r0) * k / (n - 1.0);
        return R * std::exp(cx(0.0, sigma));
    }
};

/// Frame Y(s) = exp(-a(s)) s^G with an explicit branch of log s.
struct Frame {
    Exponent a;
    Eigen::MatrixXcd G;

    Eigen::MatrixXcd eval(cx s, double arg_s) const;
    Eigen::MatrixXcd eval_inverse(cx s, double arg_s) const;
};

/// Closed-form matrix of the elementary block at the point s:
/// A(s) = exp(a(s+1)-a(s)) (1+1/s)^{-G}.
Eigen::MatrixXcd elementary_matrix(const FormalBlock& b, cx s, double arg_s);

/// Branch of arg for points near a ray: arg_s = sigma + principal offset.
double ray_arg(cx s, double sigma);

struct GrowthFit {
    GrowthClass cls = GrowthClass::Moderate;
    double mu = 0.0;   // coefficient of R
    double nu = 0.0;   // coefficient of log R
    double c0 = 0.0;
    double rms = 0.0;  // fit residual
    bool below_floor = false;
    int used = 0;
};

/// Fit log|y| ~ mu R + nu log R + c and classify by mu against mu_tol.
/// Samples at or below `floor` are dropped; all-floor data counts as
/// rapid decay of a numerically zero section.
GrowthFit fit_growth(const std::vector<double>& R, const std::vector<double>& absval,
                     double mu_tol = 1e-3, double floor = 0.0);

GrowthFit classify_growth(const RaySamples& samples, double mu_tol = 1e-3, double floor = 0.0);

struct QuadratureParams {
    double c_radius = 8.0;    // |c| along the ray
    double p_advance = 2.0;   // p = c + p_advance * e^{i sigma}
    double q_advance = 4.0;   // q = c + q_advance * e^{i sigma}
    double perp_offset = 1.0; // off-axis shift when the ray is nearly horizontal
    double sector_eps = 0.1;
    int gl_points = 16;
    double tail_cutoff = 1e-16;
    double panel_rel_tol = 1e-11;
    int max_panels = 40000;
    int max_depth = 24;
    bool auto_shift = true;  // apply the 2*pi*i*s Z shift when (mu) fails
};

struct LambdaResult {
    RaySamples out;
    double err_estimate = 0.0;
    int applied_shift = 0;
    cx anchor_p;
};

/// The sectorial splitting operator: out(s) = -f(s) + Y(s) * integral over
/// C(s) = p + R_{>0}(s + 1/2 - p) of Y(z)^{-1} f(z) / (1 - e^{2 pi i (s-z)}) dz.
/// Companions at s+1 share the anchor, so the identity A(s) out(s+1) - out(s)
/// = f(s) holds up to quadrature error.
LambdaResult lambda_apply(const FormalBlock& model,
                          const std::function<Eigen::VectorXcd(cx)>& f, const RayGrid& grid,
                          const QuadratureParams& qp, ExecPolicy pol = kDefaultPolicy);
LambdaResult lambda_apply_serial(const FormalBlock& model,
                                 const std::function<Eigen::VectorXcd(cx)>& f,
                                 const RayGrid& grid, const QuadratureParams& qp);

/// Shift making the representative satisfy the normalization inequality
/// -2 pi + R(c_m, theta, eps) + Im(c_m) < 0 (mirrored for downward paths).
int normalization_shift(const Exponent& a, double theta, double eps, int kernel_sign);

/// nabla_psi y (s) = A(s) y(s+1) - y(s); max relative deviation over samples.
double residual(const DiffSystem& sys, const RaySamples& samples);
/// Same but measuring nabla_psi y - f for an inhomogeneous right side.
double residual_against(const DiffSystem& sys, const RaySamples& samples,
                        const std::function<Eigen::VectorXcd(cx)>& f);

struct FlatParams {
    std::vector<double> sigmas;  // sampling rays (s-plane); default: arc midline
    double r0 = 10.0;
    double r1 = 40.0;
    int n = 31;
    int chain = 24;          // recurrence steps from the asymptotic seed
    double stokes_clearance = 1e-3;
    bool one_sided_nudge = true;
};

struct SectorialSolution {
    Arc arc;
    FormalDatum datum;
    std::vector<RaySamples> rays;
    double max_residual = 0.0;
    bool nudged_ray = false;  // a sampling ray sat on a Stokes direction
};

/// Fundamental-matrix samples with W(s) Y(s)^{-1} -> I, built from the gauge
/// chain of the formal reduction and refined by the recurrence in the stable
/// direction per block.
SectorialSolution flat_sections(const DiffSystem& sys, const FormalReduction& red,
                                const Arc& arc, const FlatParams& fp,
                                ExecPolicy pol = kDefaultPolicy);
SectorialSolution flat_sections_serial(const DiffSystem& sys, const FormalReduction& red,
                                       const Arc& arc, const FlatParams& fp);

/// Convenience: reduce, then solve.
SectorialSolution flat_sections(const DiffSystem& sys, const Arc& arc, const FlatParams& fp,
                                ExecPolicy pol = kDefaultPolicy);

void write_ray_csv(const RaySamples& samples, const std::string& path);

}  // namespace mildstokes
