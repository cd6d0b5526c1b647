#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mildstokes/series.hpp"

namespace mildstokes {

enum class GrowthClass { RapidDecay = 0, Moderate = 1, Growth = 2 };

const char* to_string(GrowthClass g);

/// Index a(s) = sum_{l=1}^{m} c_l s^{l/m}  (equivalently sum c_l tau^{-l},
/// tau^m = t = s^{-1}).  Mildness keeps the s-degree at 1.
struct Exponent {
    int ram = 1;
    std::vector<cx> c;  // c[l-1] multiplies s^{l/m}

    Exponent() : c(1, cx(0.0)) {}
    explicit Exponent(int m) : ram(m), c(static_cast<size_t>(m), cx(0.0)) {
        if (m < 1 || m > kMaxRamification) throw RamificationCapExceeded(m);
    }
    static Exponent linear(cx c1) {
        Exponent a(1);
        a.c[0] = c1;
        return a;
    }

    cx top() const { return c[static_cast<size_t>(ram - 1)]; }  // coefficient of s
    cx& top() { return c[static_cast<size_t>(ram - 1)]; }

    /// a(s) for s = R e^{i sigma}; sigma is the branch of arg s.
    cx eval(double R, double sigma) const;

    bool is_zero(double tol = kCoeffTol) const;
};

Exponent with_ramification(const Exponent& a, int m2);
Exponent reduce_ramification(const Exponent& a);
void unify(Exponent& a, Exponent& b);

Exponent operator+(const Exponent& a, const Exponent& b);
Exponent operator-(const Exponent& a, const Exponent& b);
Exponent operator-(const Exponent& a);
Exponent operator*(cx s, const Exponent& a);

bool approx_equal(const Exponent& a, const Exponent& b, double tol = kCoeffTol);
/// Equality in the 2*pi*i*s Z orbit: a - b = 2*pi*i*n*s for an integer n.
bool orbit_equal(const Exponent& a, const Exponent& b, double tol = 1e-9);

/// c_m += 2*pi*i*n.  The result is generally a non-canonical representative.
Exponent shift(const Exponent& a, int n);
bool is_canonical(const Exponent& a);
/// Returns the canonical representative (Im of the s-coefficient in (-pi, pi])
/// together with the shift that was removed: a == shift(canonical, n).
std::pair<Exponent, int> canonicalize(const Exponent& a);

/// Coefficient action c_l -> c_l * zeta^{-l} of an m-th root of unity.
Exponent mu_action(cx zeta, const Exponent& a);

/// Open arc (start, end) on the t-circle, width < 2*pi.  Directions in the
/// s-plane are sigma = -theta (from s = 1/t); sigma_lo()/sigma_hi() give the
/// corresponding s-direction interval.
struct Arc {
    double start = 0.0;
    double end = 0.0;

    Arc() = default;
    Arc(double a, double b) : start(a), end(b) {
        if (!(a < b) || b - a >= 2.0 * 3.14159265358979323846)
            throw FullCircleArc();
    }

    double width() const { return end - start; }
    bool contains_angle(double theta) const;  // modular membership
    bool contains_one() const { return contains_angle(0.0); }      // e^{i0}
    bool contains_minus_one() const;                               // e^{i pi}
    double sigma_lo() const { return -end; }
    double sigma_hi() const { return -start; }
};

/// Sign of the dominant term of Re a along arg s = sigma.
GrowthClass growth_class(const Exponent& a, double sigma);

/// a <=_U b resp. a <_U b for the arc U on the t-circle.
bool leq(const Exponent& a, const Exponent& b, const Arc& U);
bool lt(const Exponent& a, const Exponent& b, const Arc& U);

struct StokesDirection {
    double sigma;     // in (-pi, pi]
    int dominant_l;   // the term whose real part crosses zero
    int sign_change;  // +1: class goes RapidDecay -> Growth with increasing sigma
};

/// Directions where the dominance order of a vs b degenerates.
std::vector<StokesDirection> stokes_directions(const Exponent& a, const Exponent& b,
                                               double tol = kCoeffTol);

std::string to_string(const Exponent& a);

}  // namespace mildstokes
