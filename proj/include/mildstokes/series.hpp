#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "mildstokes/errors.hpp"

namespace mildstokes {

using cx = std::complex<double>;

inline constexpr int kDefaultOrder = 16;  // default truncation K on the k/m grid
inline constexpr int kMaxRamification = 12;
inline constexpr double kCoeffTol = 1e-12;

/// Finite Laurent/Puiseux expansion: sum of c[k-low] * t^(k/ram) for
/// low <= k <= high, plus an implicit O(t^((high+1)/ram)) tail.
struct PuiseuxSeries {
    int ram = 1;   // m
    int low = 0;   // k_min
    int high = kDefaultOrder;
    std::vector<cx> c;

    PuiseuxSeries() : c(static_cast<size_t>(high - low + 1), cx(0.0)) {}
    PuiseuxSeries(int m, int lo, int hi)
        : ram(m), low(lo), high(hi), c(static_cast<size_t>(hi - lo + 1), cx(0.0)) {
        if (m < 1 || m > kMaxRamification) throw RamificationCapExceeded(m);
        if (lo > hi) throw InsufficientTruncation();
    }

    cx at(int k) const { return (k < low || k > high) ? cx(0.0) : c[static_cast<size_t>(k - low)]; }
    cx& ref(int k) { return c[static_cast<size_t>(k - low)]; }

    // Index of the first coefficient above the noise floor, or high+1 if none.
    int valuation() const;
    double max_abs() const;
    bool is_zero(double tol = kCoeffTol) const;

    /// Evaluate at t = |t| e^{i arg_t}; fractional powers use the given branch.
    cx eval(cx t, double arg_t) const;
    cx eval(double abs_t, double arg_t) const;
};

PuiseuxSeries ps_const(cx v, int m = 1, int high = kDefaultOrder);
PuiseuxSeries ps_monomial(cx coef, int k, int m = 1, int high = kDefaultOrder);

/// Re-index into a finer exponent grid m2 (m must divide m2).
PuiseuxSeries with_ramification(const PuiseuxSeries& f, int m2);
/// Shrink the ramification when every nonzero exponent allows it.
PuiseuxSeries reduce_ramification(const PuiseuxSeries& f);

void unify(PuiseuxSeries& a, PuiseuxSeries& b);

PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b);
PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b);
PuiseuxSeries operator-(const PuiseuxSeries& a);
PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b);
PuiseuxSeries operator*(cx s, const PuiseuxSeries& a);

/// Multiplicative inverse; leading coefficient must be nonzero.
PuiseuxSeries invert(const PuiseuxSeries& f);

/// The difference substitution t -> t/(1+t); on the ramified grid each
/// monomial tau^k picks up the factor (1+t)^{-k/m}.
PuiseuxSeries phi_substitute(const PuiseuxSeries& f);
/// Inverse substitution t -> t/(1-t).
PuiseuxSeries phi_inverse_substitute(const PuiseuxSeries& f);

/// log(1+t) = t - t^2/2 + t^3/3 - ... on the grid (m, [1, high]).
PuiseuxSeries log1p_series(int high = kDefaultOrder, int m = 1);
/// (1+t)^alpha as a binomial series in t, expressed on the grid of m.
PuiseuxSeries binom_series(cx alpha, int high = kDefaultOrder, int m = 1);

/// exp of a series whose nonzero support starts at exponent >= 1/m
/// (an additive constant term is allowed and exponentiated separately).
PuiseuxSeries exp_series(const PuiseuxSeries& f);
/// Principal log of a unit series (valuation 0, leading coefficient != 0).
PuiseuxSeries log_series(const PuiseuxSeries& f);

bool approx_equal(const PuiseuxSeries& a, const PuiseuxSeries& b, double tol = kCoeffTol);

std::string to_string(const PuiseuxSeries& f);

/// Square matrix of series sharing one (ram, low, high) window; stored as a
/// list of coefficient matrices.
struct MatrixSeries {
    int n = 0;
    int ram = 1;
    int low = 0;
    int high = kDefaultOrder;
    std::vector<Eigen::MatrixXcd> coef;

    MatrixSeries() = default;
    MatrixSeries(int size, int m, int lo, int hi)
        : n(size), ram(m), low(lo), high(hi),
          coef(static_cast<size_t>(hi - lo + 1), Eigen::MatrixXcd::Zero(size, size)) {
        if (m < 1 || m > kMaxRamification) throw RamificationCapExceeded(m);
        if (lo > hi) throw InsufficientTruncation();
    }

    static MatrixSeries identity(int size, int m = 1, int high = kDefaultOrder);
    static MatrixSeries constant(const Eigen::MatrixXcd& a, int m = 1, int high = kDefaultOrder);

    Eigen::MatrixXcd at(int k) const;
    Eigen::MatrixXcd& ref(int k) { return coef[static_cast<size_t>(k - low)]; }

    Eigen::MatrixXcd leading() const;  // coefficient at the valuation order
    int valuation() const;
    double max_abs() const;

    PuiseuxSeries entry(int i, int j) const;
    void set_entry(int i, int j, const PuiseuxSeries& f);

    Eigen::MatrixXcd eval(cx t, double arg_t) const;
};

MatrixSeries from_entries(const std::vector<std::vector<PuiseuxSeries>>& e);

void unify(MatrixSeries& a, MatrixSeries& b);
MatrixSeries operator+(const MatrixSeries& a, const MatrixSeries& b);
MatrixSeries operator-(const MatrixSeries& a, const MatrixSeries& b);
MatrixSeries operator*(const MatrixSeries& a, const MatrixSeries& b);
MatrixSeries operator*(const PuiseuxSeries& s, const MatrixSeries& a);
MatrixSeries operator*(cx s, const MatrixSeries& a);

MatrixSeries invert(const MatrixSeries& a);
MatrixSeries phi_substitute(const MatrixSeries& a);
MatrixSeries kron(const MatrixSeries& a, const MatrixSeries& b);
MatrixSeries transpose(const MatrixSeries& a);

/// (1+t)^(sign*G) = exp(sign * G * log(1+t)), truncated at `high`.
MatrixSeries matrix_power_1pt(const Eigen::MatrixXcd& G, int sign, int high = kDefaultOrder,
                              int m = 1);

bool approx_equal(const MatrixSeries& a, const MatrixSeries& b, double tol = kCoeffTol);

}  // namespace mildstokes
