#include "mildstokes/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mildstokes {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_to_halfopen(double x) {
    // into (-pi, pi]; values within rounding of -pi land on +pi
    double y = std::fmod(x, kTwoPi);
    if (y <= -kPi + 1e-9) y += kTwoPi;
    if (y > kPi + 1e-9) y -= kTwoPi;
    return y;
}
}  // namespace

const char* to_string(GrowthClass g) {
    switch (g) {
        case GrowthClass::RapidDecay: return "RapidDecay";
        case GrowthClass::Moderate: return "Moderate";
        default: return "Growth";
    }
}

cx Exponent::eval(double R, double sigma) const {
    cx total(0.0);
    double lr = std::log(R);
    for (int l = 1; l <= ram; ++l) {
        cx cl = c[static_cast<size_t>(l - 1)];
        if (cl == cx(0.0)) continue;
        total += cl * std::exp(cx(lr, sigma) * (static_cast<double>(l) / ram));
    }
    return total;
}

bool Exponent::is_zero(double tol) const {
    for (const cx& v : c)
        if (std::abs(v) > tol) return false;
    return true;
}

Exponent with_ramification(const Exponent& a, int m2) {
    if (m2 == a.ram) return a;
    if (m2 % a.ram != 0 || m2 > kMaxRamification) throw RamificationCapExceeded(m2);
    int q = m2 / a.ram;
    Exponent b(m2);
    for (int l = 1; l <= a.ram; ++l) b.c[static_cast<size_t>(l * q - 1)] = a.c[static_cast<size_t>(l - 1)];
    return b;
}

Exponent reduce_ramification(const Exponent& a) {
    int g = 0;
    for (int l = 1; l <= a.ram; ++l)
        if (std::abs(a.c[static_cast<size_t>(l - 1)]) > kCoeffTol) g = std::gcd(g, l);
    g = std::gcd(g, a.ram);
    if (g <= 1) return a;
    Exponent b(a.ram / g);
    for (int l = 1; l <= b.ram; ++l) b.c[static_cast<size_t>(l - 1)] = a.c[static_cast<size_t>(l * g - 1)];
    return b;
}

void unify(Exponent& a, Exponent& b) {
    int m = std::lcm(a.ram, b.ram);
    if (m > kMaxRamification) throw RamificationCapExceeded(m);
    if (a.ram != m) a = with_ramification(a, m);
    if (b.ram != m) b = with_ramification(b, m);
}

Exponent operator+(const Exponent& a0, const Exponent& b0) {
    Exponent a = a0, b = b0;
    unify(a, b);
    for (size_t i = 0; i < a.c.size(); ++i) a.c[i] += b.c[i];
    return a;
}

Exponent operator-(const Exponent& a) {
    Exponent b = a;
    for (cx& v : b.c) v = -v;
    return b;
}

Exponent operator-(const Exponent& a, const Exponent& b) { return a + (-b); }

Exponent operator*(cx s, const Exponent& a) {
    Exponent b = a;
    for (cx& v : b.c) v *= s;
    return b;
}

bool approx_equal(const Exponent& a0, const Exponent& b0, double tol) {
    Exponent a = a0, b = b0;
    unify(a, b);
    double scale = 1.0;
    for (const cx& v : a.c) scale = std::max(scale, std::abs(v));
    for (const cx& v : b.c) scale = std::max(scale, std::abs(v));
    for (size_t i = 0; i < a.c.size(); ++i)
        if (std::abs(a.c[i] - b.c[i]) > tol * scale) return false;
    return true;
}

bool orbit_equal(const Exponent& a, const Exponent& b, double tol) {
    Exponent d = a - b;
    cx cm = d.top();
    double n = cm.imag() / kTwoPi;
    double nr = std::round(n);
    if (std::abs(cm.real()) > tol) return false;
    if (std::abs(n - nr) * kTwoPi > tol) return false;
    d.top() = 0.0;
    return d.is_zero(tol);
}

Exponent shift(const Exponent& a, int n) {
    Exponent b = a;
    b.top() += cx(0.0, kTwoPi * n);
    return b;
}

bool is_canonical(const Exponent& a) {
    double im = a.top().imag();
    return im > -kPi && im <= kPi;
}

std::pair<Exponent, int> canonicalize(const Exponent& a) {
    double im = a.top().imag();
    int n = static_cast<int>(std::ceil((im - kPi) / kTwoPi - 1e-15));
    return {shift(a, -n), n};
}

Exponent mu_action(cx zeta, const Exponent& a) {
    cx zm = std::pow(zeta, a.ram);
    if (std::abs(zm - cx(1.0)) > 1e-9) throw NotRootOfUnity();
    Exponent b = a;
    cx zinv = cx(1.0) / zeta;
    cx f = zinv;
    for (int l = 1; l <= a.ram; ++l) {
        b.c[static_cast<size_t>(l - 1)] *= f;
        f *= zinv;
    }
    return b;
}

bool Arc::contains_angle(double theta) const {
    double d = theta - start;
    d -= kTwoPi * std::floor(d / kTwoPi);
    return d > 0.0 && d < width();
}

bool Arc::contains_minus_one() const { return contains_angle(kPi); }

GrowthClass growth_class(const Exponent& a, double sigma) {
    for (int l = a.ram; l >= 1; --l) {
        cx cl = a.c[static_cast<size_t>(l - 1)];
        double re = (cl * std::exp(cx(0.0, sigma * l / a.ram))).real();
        if (std::abs(re) < 1e-12 * (1.0 + std::abs(cl))) continue;
        return re > 0.0 ? GrowthClass::Growth : GrowthClass::RapidDecay;
    }
    return GrowthClass::Moderate;
}

namespace {

// Crossing directions of the dominant real part on the universal cover,
// restricted to the open interval (lo, hi).  Fractional powers make the class
// a function of the lifted direction, not of the circle point.
std::vector<double> cover_crossings(const Exponent& d, double lo, double hi, double tol) {
    std::vector<double> cuts;
    double scale = 0.0;
    for (const cx& v : d.c) scale = std::max(scale, std::abs(v));
    int ltop = 0;
    for (int l = d.ram; l >= 1; --l)
        if (std::abs(d.c[static_cast<size_t>(l - 1)]) > tol * (scale + 1.0)) {
            ltop = l;
            break;
        }
    if (ltop == 0) return cuts;
    cx ctop = d.c[static_cast<size_t>(ltop - 1)];
    double beta = std::arg(ctop);
    double ratio = static_cast<double>(d.ram) / ltop;
    // sigma_j = (pi/2 - beta + j pi) * m / ltop
    int jlo = static_cast<int>(std::floor((lo / ratio + beta - kPi / 2.0) / kPi)) - 1;
    int jhi = static_cast<int>(std::ceil((hi / ratio + beta - kPi / 2.0) / kPi)) + 1;
    for (int j = jlo; j <= jhi; ++j) {
        double sigma = (kPi / 2.0 - beta + j * kPi) * ratio;
        if (sigma > lo + 1e-14 && sigma < hi - 1e-14) cuts.push_back(sigma);
    }
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

// Evaluation directions for the order relation: the class of a-b is piecewise
// constant between its crossings, so endpoints, interior crossing points,
// and midpoints decide everything.
std::vector<double> probe_directions(const Exponent& d, const Arc& U, bool interior_only) {
    double lo = U.sigma_lo(), hi = U.sigma_hi();
    std::vector<double> pts;
    if (!interior_only) {
        pts.push_back(lo);
        pts.push_back(hi);
    }
    std::vector<double> cuts = cover_crossings(d, lo, hi, kCoeffTol);
    std::vector<double> nodes = {lo};
    nodes.insert(nodes.end(), cuts.begin(), cuts.end());
    nodes.push_back(hi);
    for (size_t i = 0; i + 1 < nodes.size(); ++i) pts.push_back(0.5 * (nodes[i] + nodes[i + 1]));
    for (double c : cuts) pts.push_back(c);
    return pts;
}

}  // namespace

bool leq(const Exponent& a, const Exponent& b, const Arc& U) {
    Exponent d = a - b;
    for (double s : probe_directions(d, U, false))
        if (growth_class(d, s) == GrowthClass::Growth) return false;
    return true;
}

bool lt(const Exponent& a, const Exponent& b, const Arc& U) {
    // rapid decay up to the endpoint limits
    Exponent d = a - b;
    for (double s : probe_directions(d, U, false))
        if (growth_class(d, s) != GrowthClass::RapidDecay) return false;
    return true;
}

std::vector<StokesDirection> stokes_directions(const Exponent& a, const Exponent& b, double tol) {
    Exponent d = a - b;
    if (d.is_zero(tol) || orbit_equal(a, b)) throw EqualExponents();
    int ltop = 0;
    double scale = 0.0;
    for (const cx& v : d.c) scale = std::max(scale, std::abs(v));
    for (int l = d.ram; l >= 1; --l) {
        if (std::abs(d.c[static_cast<size_t>(l - 1)]) > tol * scale) {
            ltop = l;
            break;
        }
    }
    cx ctop = d.c[static_cast<size_t>(ltop - 1)];
    double beta = std::arg(ctop);
    double ratio = static_cast<double>(d.ram) / ltop;
    // Re(ctop e^{i l sigma / m}) = 0  <=>  sigma = (pi/2 - beta + j pi) m / l
    std::vector<StokesDirection> out;
    // enough j to cover (-pi, pi] after wrapping
    int jmax = 2 * (d.ram / ltop + 1) + 2;
    for (int j = -jmax; j <= jmax; ++j) {
        double sigma = (kPi / 2.0 - beta + j * kPi) * ratio;
        double w = wrap_to_halfopen(sigma);
        bool dup = false;
        for (const auto& s : out)
            if (std::abs(wrap_to_halfopen(s.sigma - w)) < 1e-10) dup = true;
        if (dup) continue;
        // class just above/below the crossing decides the sign change
        double eps = 1e-6 * ratio;
        GrowthClass above = growth_class(d, w + eps);
        out.push_back({w, ltop, above == GrowthClass::Growth ? +1 : -1});
    }
    std::sort(out.begin(), out.end(),
              [](const StokesDirection& x, const StokesDirection& y) { return x.sigma < y.sigma; });
    return out;
}

std::string to_string(const Exponent& a) {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (int l = a.ram; l >= 1; --l) {
        cx v = a.c[static_cast<size_t>(l - 1)];
        if (std::abs(v) <= kCoeffTol) continue;
        if (!first) os << " + ";
        first = false;
        if (v.imag() == 0.0)
            os << v.real();
        else
            os << "(" << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "i)";
        os << "*s";
        if (l != a.ram) os << "^(" << l << "/" << a.ram << ")";
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace mildstokes
