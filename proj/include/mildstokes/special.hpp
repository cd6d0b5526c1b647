#pragma once

#include <complex>
#include <vector>

#include "mildstokes/errors.hpp"

namespace mildstokes {

using cx = std::complex<double>;

struct GammaEval {
    cx value;
    cx log_value;           // branch-tracked along the ray it was produced on
    double arg_continuity;  // accumulated Im(log Gamma) relative to the first sample
};

/// Gamma(z); throws PoleAt near non-positive integers.
cx gamma(cx z);

/// log Gamma, analytic on the right half-plane, principal-type on the left.
/// Use log_gamma_ray when a continuous branch across the cut is needed.
cx log_gamma(cx z);

/// Branch-continuous log Gamma at s0 + k * step * e^{i sigma}, k = 0..count-1.
std::vector<GammaEval> log_gamma_ray(cx s0, double sigma, int count, double step = 1.0);

/// Relative deviation of (1-u) Gamma(s) from -2*pi*i*e^{i pi s}/Gamma(1-s),
/// u = exp(2*pi*i*s).  Throws IntegerInput on (near-)integers.
double reflection_residual(cx s);

/// Continuous log along a ray for plain powers: values of log(s0 + k e^{i sigma} step).
std::vector<cx> log_ray(cx s0, double sigma, int count, double step = 1.0);

}  // namespace mildstokes
