#include "mildstokes/special.hpp"

#include <array>
#include <cmath>

namespace mildstokes {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2 pi)

// Godfrey's Lanczos coefficients, g = 607/128.  Relative error ~1e-15 on the
// right half-plane.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosC = {
    0.99999999999999709182,    57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,     -0.49191381609762019978,   3.3994649984811888699e-5,
    4.6523628927048575665e-5,  -9.8374475304879564677e-5, 1.5808870322491248884e-4,
    -2.1026444172410488319e-4, 2.1743961811521264320e-4,  -1.6431810653676389022e-4,
    8.4418223983852743293e-5,  -2.6190838401581408670e-5, 3.6899182659531622704e-6};

// Even Bernoulli numbers B_2, B_4, ... for the Stirling tail.
constexpr std::array<double, 10> kBernoulli2n = {
    1.0 / 6.0,  -1.0 / 30.0,   1.0 / 42.0,      -1.0 / 30.0,    5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0};

cx lanczos_log_gamma_right(cx z) {
    // valid for Re z >= 0.5
    cx sum(kLanczosC[0]);
    for (size_t k = 1; k < kLanczosC.size(); ++k) sum += kLanczosC[k] / (z + cx(static_cast<double>(k) - 1.0));
    cx t = z + cx(kLanczosG - 0.5);
    return (z - cx(0.5)) * std::log(t) - t + 0.5 * kLogTwoPi + std::log(sum);
}

cx stirling_log_gamma_right(cx z) {
    // asymptotic series, Re z > 0 and |z| large
    cx r = (z - cx(0.5)) * std::log(z) - z + 0.5 * kLogTwoPi;
    cx zi = cx(1.0) / z;
    cx zpow = zi;
    cx z2 = zi * zi;
    for (size_t n = 0; n < kBernoulli2n.size(); ++n) {
        double tn = 2.0 * (n + 1.0);
        r += kBernoulli2n[n] / (tn * (tn - 1.0)) * zpow;
        zpow *= z2;
    }
    return r;
}

// log(sin(pi z)) without overflow for large |Im z|.
cx log_sin_pi(cx z) {
    if (z.imag() > 1.0) {
        // sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2i) -> dominated by e^{-i pi z}
        cx w = cx(0.0, 2.0 * kPi) * z;
        return cx(0.0, -kPi) * z + std::log((std::exp(w) - cx(1.0)) / cx(0.0, 2.0));
    }
    if (z.imag() < -1.0) {
        cx w = cx(0.0, -2.0 * kPi) * z;
        return cx(0.0, kPi) * z + std::log((cx(1.0) - std::exp(w)) / cx(0.0, 2.0));
    }
    return std::log(std::sin(kPi * z));
}

double pole_distance(cx z) {
    if (z.real() > 0.5) return 1e300;
    double rn = std::round(z.real());
    if (rn > 0.0) return 1e300;
    return std::abs(z - cx(rn));
}

}  // namespace

cx log_gamma(cx z) {
    if (z.real() >= 0.5) {
        if (std::abs(z) >= 32.0) return stirling_log_gamma_right(z);
        return lanczos_log_gamma_right(z);
    }
    // reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z)
    return std::log(kPi) - log_sin_pi(z) - log_gamma(cx(1.0) - z);
}

cx gamma(cx z) {
    if (pole_distance(z) < 1e-10) throw PoleAt(z);
    return std::exp(log_gamma(z));
}

std::vector<GammaEval> log_gamma_ray(cx s0, double sigma, int count, double step) {
    std::vector<GammaEval> out;
    out.reserve(static_cast<size_t>(count));
    cx dir = std::exp(cx(0.0, sigma)) * step;
    double offset = 0.0;
    double prev_im = 0.0;
    cx prev_s;
    for (int k = 0; k < count; ++k) {
        cx s = s0 + static_cast<double>(k) * dir;
        if (pole_distance(s) < 0.1) throw RayHitsPole();
        cx lg = log_gamma(s);
        if (k > 0) {
            // Pointwise branches differ by 2 pi jumps; unwrap against the
            // digamma prediction so steps with fast-moving Im stay correct.
            cx mid = 0.5 * (prev_s + s);
            cx psi = std::log(mid) - 0.5 / mid;
            double predicted = prev_im + (psi * dir).imag();
            double d = lg.imag() + offset - predicted;
            offset -= 2.0 * kPi * std::round(d / (2.0 * kPi));
        }
        cx tracked = lg + cx(0.0, offset);
        prev_im = tracked.imag();
        prev_s = s;
        GammaEval e;
        e.log_value = tracked;
        e.value = std::exp(lg);
        e.arg_continuity = k == 0 ? 0.0 : tracked.imag() - out[0].log_value.imag();
        out.push_back(e);
    }
    return out;
}

double reflection_residual(cx s) {
    if (std::abs(s - std::round(s.real())) < 1e-10 && std::abs(s.imag()) < 1e-10)
        throw IntegerInput();
    cx u = std::exp(cx(0.0, 2.0 * kPi) * s);
    cx lhs = (cx(1.0) - u) * gamma(s);
    cx rhs = cx(0.0, -2.0 * kPi) * std::exp(cx(0.0, kPi) * s) / gamma(cx(1.0) - s);
    double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale == 0.0) return 0.0;
    return std::abs(lhs - rhs) / scale;
}

std::vector<cx> log_ray(cx s0, double sigma, int count, double step) {
    std::vector<cx> out;
    out.reserve(static_cast<size_t>(count));
    cx dir = std::exp(cx(0.0, sigma)) * step;
    double offset = 0.0;
    double prev = 0.0;
    for (int k = 0; k < count; ++k) {
        cx s = s0 + static_cast<double>(k) * dir;
        cx l = std::log(s);
        if (k > 0) {
            double d = l.imag() + offset - prev;
            offset -= 2.0 * kPi * std::round(d / (2.0 * kPi));
        }
        cx tracked = l + cx(0.0, offset);
        prev = tracked.imag();
        out.push_back(tracked);
    }
    return out;
}

}  // namespace mildstokes
