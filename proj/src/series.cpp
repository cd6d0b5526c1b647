#include "mildstokes/series.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mildstokes {

namespace {

int lcm_ram(int a, int b) {
    int l = std::lcm(a, b);
    if (l > kMaxRamification) throw RamificationCapExceeded(l);
    return l;
}

// Coefficient noise floor relative to the largest coefficient.
double floor_of(const PuiseuxSeries& f) { return kCoeffTol * (1.0 + f.max_abs()); }

}  // namespace

int PuiseuxSeries::valuation() const {
    double fl = floor_of(*this);
    for (int k = low; k <= high; ++k)
        if (std::abs(at(k)) > fl) return k;
    return high + 1;
}

double PuiseuxSeries::max_abs() const {
    double m = 0.0;
    for (const cx& v : c) m = std::max(m, std::abs(v));
    return m;
}

bool PuiseuxSeries::is_zero(double tol) const {
    double m = max_abs();
    return m <= tol;
}

cx PuiseuxSeries::eval(cx t, double arg_t) const { return eval(std::abs(t), arg_t); }

cx PuiseuxSeries::eval(double abs_t, double arg_t) const {
    // Horner on the integer grid would lose the fractional branch; evaluate
    // grouped by residue class mod ram instead.
    cx total(0.0);
    double lr = std::log(abs_t);
    for (int r = 0; r < ram; ++r) {
        // residue class k = r (mod ram), Horner in t = tau^ram
        cx tpow = std::exp(cx(lr, arg_t));  // t itself
        cx acc(0.0);
        bool any = false;
        for (int k = high; k >= low; --k) {
            if (((k % ram) + ram) % ram != r) continue;
            if (any) acc *= tpow;
            acc += at(k);
            any = true;
        }
        if (!any) continue;
        int kmin = low;
        while (((kmin % ram) + ram) % ram != r) ++kmin;
        acc *= std::exp(cx(lr, arg_t) * (static_cast<double>(kmin) / ram));
        total += acc;
    }
    return total;
}

PuiseuxSeries ps_const(cx v, int m, int high) {
    PuiseuxSeries f(m, 0, high);
    f.ref(0) = v;
    return f;
}

PuiseuxSeries ps_monomial(cx coef, int k, int m, int high) {
    PuiseuxSeries f(m, std::min(k, 0), std::max(high, k));
    f.ref(k) = coef;
    return f;
}

PuiseuxSeries with_ramification(const PuiseuxSeries& f, int m2) {
    if (m2 == f.ram) return f;
    if (m2 % f.ram != 0) throw RamificationCapExceeded(m2);
    if (m2 > kMaxRamification) throw RamificationCapExceeded(m2);
    int q = m2 / f.ram;
    PuiseuxSeries g(m2, f.low * q, f.high * q + (q - 1));
    for (int k = f.low; k <= f.high; ++k) g.ref(k * q) = f.at(k);
    return g;
}

PuiseuxSeries reduce_ramification(const PuiseuxSeries& f) {
    double fl = floor_of(f);
    int g = 0;
    for (int k = f.low; k <= f.high; ++k)
        if (std::abs(f.at(k)) > fl) g = std::gcd(g, std::abs(k));
    g = std::gcd(g, f.ram);
    if (g <= 1) return f;
    // keep only exponents divisible by g; grid shrinks by g
    PuiseuxSeries out(f.ram / g, f.low / g - ((f.low % g) ? 1 : 0), f.high / g);
    for (int k = out.low; k <= out.high; ++k) out.ref(k) = f.at(k * g);
    return out;
}

void unify(PuiseuxSeries& a, PuiseuxSeries& b) {
    int m = lcm_ram(a.ram, b.ram);
    if (a.ram != m) a = with_ramification(a, m);
    if (b.ram != m) b = with_ramification(b, m);
}

PuiseuxSeries operator+(const PuiseuxSeries& a0, const PuiseuxSeries& b0) {
    PuiseuxSeries a = a0, b = b0;
    unify(a, b);
    int lo = std::min(a.low, b.low);
    int hi = std::min(a.high, b.high);
    PuiseuxSeries r(a.ram, lo, hi);
    for (int k = lo; k <= hi; ++k) r.ref(k) = a.at(k) + b.at(k);
    return r;
}

PuiseuxSeries operator-(const PuiseuxSeries& a) {
    PuiseuxSeries r = a;
    for (cx& v : r.c) v = -v;
    return r;
}

PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a + (-b); }

PuiseuxSeries operator*(const PuiseuxSeries& a0, const PuiseuxSeries& b0) {
    PuiseuxSeries a = a0, b = b0;
    unify(a, b);
    int lo = a.low + b.low;
    int hi = std::min(a.high + b.low, b.high + a.low);
    if (hi < lo) hi = lo;
    PuiseuxSeries r(a.ram, lo, hi);
    for (int i = a.low; i <= a.high; ++i) {
        if (a.at(i) == cx(0.0)) continue;
        for (int j = b.low; j <= b.high && i + j <= hi; ++j) r.ref(i + j) += a.at(i) * b.at(j);
    }
    return r;
}

PuiseuxSeries operator*(cx s, const PuiseuxSeries& a) {
    PuiseuxSeries r = a;
    for (cx& v : r.c) v *= s;
    return r;
}

PuiseuxSeries invert(const PuiseuxSeries& f) {
    int v = f.valuation();
    if (v > f.high) throw ZeroLeadingTerm();
    cx lead = f.at(v);
    int n = f.high - v;  // relative orders available
    // f = lead * t^(v/m) * (1 + h), invert the unit part by recursion
    std::vector<cx> h(static_cast<size_t>(n + 1), cx(0.0));
    for (int k = 0; k <= n; ++k) h[static_cast<size_t>(k)] = f.at(v + k) / lead;
    std::vector<cx> g(static_cast<size_t>(n + 1), cx(0.0));
    g[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
        cx acc(0.0);
        for (int j = 0; j < k; ++j) acc += g[static_cast<size_t>(j)] * h[static_cast<size_t>(k - j)];
        g[static_cast<size_t>(k)] = -acc;
    }
    PuiseuxSeries r(f.ram, -v, n - v);
    for (int k = 0; k <= n; ++k) r.ref(k - v) = g[static_cast<size_t>(k)] / lead;
    return r;
}

PuiseuxSeries phi_substitute(const PuiseuxSeries& f) {
    if (f.low > f.high) throw InsufficientTruncation();
    int m = f.ram;
    PuiseuxSeries r(m, f.low, f.high);
    for (int k = f.low; k <= f.high; ++k) {
        cx a = f.at(k);
        if (a == cx(0.0)) continue;
        // tau^k -> tau^k (1+t)^{-k/m}; the binomial series lives on t = tau^m
        double alpha = -static_cast<double>(k) / m;
        cx binom(1.0);
        for (int j = 0; k + j * m <= f.high; ++j) {
            if (j > 0) binom *= cx((alpha - (j - 1)) / j);
            r.ref(k + j * m) += a * binom;
        }
    }
    return r;
}

PuiseuxSeries phi_inverse_substitute(const PuiseuxSeries& f) {
    if (f.low > f.high) throw InsufficientTruncation();
    int m = f.ram;
    PuiseuxSeries r(m, f.low, f.high);
    for (int k = f.low; k <= f.high; ++k) {
        cx a = f.at(k);
        if (a == cx(0.0)) continue;
        double alpha = -static_cast<double>(k) / m;
        cx binom(1.0);
        double sign = 1.0;
        for (int j = 0; k + j * m <= f.high; ++j) {
            if (j > 0) {
                binom *= cx((alpha - (j - 1)) / j);
                sign = -sign;
            }
            r.ref(k + j * m) += a * binom * sign;
        }
    }
    return r;
}

PuiseuxSeries log1p_series(int high, int m) {
    PuiseuxSeries r(m, m, std::max(high, m));
    for (int j = 1; j * m <= r.high; ++j) r.ref(j * m) = (j % 2 ? 1.0 : -1.0) / j;
    return r;
}

PuiseuxSeries binom_series(cx alpha, int high, int m) {
    PuiseuxSeries r(m, 0, high);
    cx b(1.0);
    for (int j = 0; j * m <= high; ++j) {
        if (j > 0) b *= (alpha - cx(j - 1.0)) / cx(static_cast<double>(j));
        r.ref(j * m) = b;
    }
    return r;
}

PuiseuxSeries exp_series(const PuiseuxSeries& f) {
    double fl = floor_of(f);
    for (int k = f.low; k < 0; ++k)
        if (std::abs(f.at(k)) > fl) throw ExpansionError("exp of a series with a pole");
    cx c0 = f.at(0);
    PuiseuxSeries g(f.ram, 1, f.high);
    for (int k = 1; k <= f.high; ++k) g.ref(k) = f.at(k);
    PuiseuxSeries r = ps_const(1.0, f.ram, f.high);
    PuiseuxSeries term = ps_const(1.0, f.ram, f.high);
    int v = std::max(g.valuation(), 1);
    for (int n = 1; n * v <= f.high; ++n) {
        term = (cx(1.0 / n)) * (term * g);
        // keep the window pinned; products shrink high by g.low each time
        PuiseuxSeries padded(f.ram, 0, f.high);
        for (int k = std::max(term.low, 0); k <= std::min(term.high, f.high); ++k)
            padded.ref(k) = term.at(k);
        term = padded;
        r = r + term;
    }
    return std::exp(c0) * r;
}

PuiseuxSeries log_series(const PuiseuxSeries& f) {
    int v = f.valuation();
    if (v != 0) throw ZeroLeadingTerm();
    cx lead = f.at(0);
    PuiseuxSeries h = (cx(1.0) / lead) * f;
    h.ref(0) = 0.0;  // h = f/lead - 1
    PuiseuxSeries r = ps_const(std::log(lead), f.ram, f.high);
    PuiseuxSeries term = ps_const(1.0, f.ram, f.high);
    int hv = std::max(h.valuation(), 1);
    for (int n = 1; n * hv <= f.high; ++n) {
        term = term * h;
        PuiseuxSeries padded(f.ram, 0, f.high);
        for (int k = std::max(term.low, 0); k <= std::min(term.high, f.high); ++k)
            padded.ref(k) = term.at(k);
        term = padded;
        r = r + (cx((n % 2 ? 1.0 : -1.0) / n)) * term;
    }
    return r;
}

bool approx_equal(const PuiseuxSeries& a0, const PuiseuxSeries& b0, double tol) {
    PuiseuxSeries a = a0, b = b0;
    unify(a, b);
    int lo = std::min(a.low, b.low);
    int hi = std::min(a.high, b.high);
    double scale = 1.0 + std::max(a.max_abs(), b.max_abs());
    for (int k = lo; k <= hi; ++k)
        if (std::abs(a.at(k) - b.at(k)) > tol * scale) return false;
    return true;
}

std::string to_string(const PuiseuxSeries& f) {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    double fl = floor_of(f);
    for (int k = f.low; k <= f.high; ++k) {
        cx v = f.at(k);
        if (std::abs(v) <= fl) continue;
        if (!first) os << " + ";
        first = false;
        if (v.imag() == 0.0)
            os << v.real();
        else
            os << "(" << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "i)";
        if (k != 0) {
            os << "*t^";
            if (k % f.ram == 0) {
                int p = k / f.ram;
                if (p < 0)
                    os << "(" << p << ")";
                else
                    os << p;
            } else {
                os << "(" << k << "/" << f.ram << ")";
            }
        }
    }
    if (first) os << "0";
    return os.str();
}

// ---------------------------------------------------------------------------
// MatrixSeries

MatrixSeries MatrixSeries::identity(int size, int m, int high) {
    MatrixSeries a(size, m, 0, high);
    a.ref(0) = Eigen::MatrixXcd::Identity(size, size);
    return a;
}

MatrixSeries MatrixSeries::constant(const Eigen::MatrixXcd& a0, int m, int high) {
    MatrixSeries a(static_cast<int>(a0.rows()), m, 0, high);
    a.ref(0) = a0;
    return a;
}

Eigen::MatrixXcd MatrixSeries::at(int k) const {
    if (k < low || k > high) return Eigen::MatrixXcd::Zero(n, n);
    return coef[static_cast<size_t>(k - low)];
}

int MatrixSeries::valuation() const {
    double fl = kCoeffTol * (1.0 + max_abs());
    for (int k = low; k <= high; ++k)
        if (coef[static_cast<size_t>(k - low)].cwiseAbs().maxCoeff() > fl) return k;
    return high + 1;
}

Eigen::MatrixXcd MatrixSeries::leading() const {
    int v = valuation();
    if (v > high) return Eigen::MatrixXcd::Zero(n, n);
    return at(v);
}

double MatrixSeries::max_abs() const {
    double m = 0.0;
    for (const auto& a : coef)
        if (a.size() > 0) m = std::max(m, a.cwiseAbs().maxCoeff());
    return m;
}

PuiseuxSeries MatrixSeries::entry(int i, int j) const {
    PuiseuxSeries f(ram, low, high);
    for (int k = low; k <= high; ++k) f.ref(k) = at(k)(i, j);
    return f;
}

void MatrixSeries::set_entry(int i, int j, const PuiseuxSeries& f0) {
    PuiseuxSeries f = with_ramification(f0, ram);
    for (int k = low; k <= high; ++k) ref(k)(i, j) = f.at(k);
}

Eigen::MatrixXcd MatrixSeries::eval(cx t, double arg_t) const {
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, n);
    double lr = std::log(std::abs(t));
    for (int r = 0; r < ram; ++r) {
        cx tpow = std::exp(cx(lr, arg_t));
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
        bool any = false;
        for (int k = high; k >= low; --k) {
            if (((k % ram) + ram) % ram != r) continue;
            if (any) acc *= tpow;
            acc += at(k);
            any = true;
        }
        if (!any) continue;
        int kmin = low;
        while (((kmin % ram) + ram) % ram != r) ++kmin;
        total += acc * std::exp(cx(lr, arg_t) * (static_cast<double>(kmin) / ram));
    }
    return total;
}

MatrixSeries from_entries(const std::vector<std::vector<PuiseuxSeries>>& e) {
    int n = static_cast<int>(e.size());
    int m = 1, lo = 0, hi = kDefaultOrder;
    bool first = true;
    for (const auto& row : e)
        for (const auto& f : row) {
            m = std::lcm(m, f.ram);
            if (m > kMaxRamification) throw RamificationCapExceeded(m);
        }
    for (const auto& row : e)
        for (const auto& f0 : row) {
            PuiseuxSeries f = with_ramification(f0, m);
            if (first) {
                lo = f.low;
                hi = f.high;
                first = false;
            } else {
                lo = std::min(lo, f.low);
                hi = std::min(hi, f.high);
            }
        }
    MatrixSeries a(n, m, lo, hi);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            PuiseuxSeries f = with_ramification(e[static_cast<size_t>(i)][static_cast<size_t>(j)], m);
            for (int k = lo; k <= hi; ++k) a.ref(k)(i, j) = f.at(k);
        }
    return a;
}

namespace {
MatrixSeries ms_with_ram(const MatrixSeries& a, int m2) {
    if (m2 == a.ram) return a;
    if (m2 % a.ram != 0 || m2 > kMaxRamification) throw RamificationCapExceeded(m2);
    int q = m2 / a.ram;
    MatrixSeries b(a.n, m2, a.low * q, a.high * q + (q - 1));
    for (int k = a.low; k <= a.high; ++k) b.ref(k * q) = a.at(k);
    return b;
}
}  // namespace

void unify(MatrixSeries& a, MatrixSeries& b) {
    int m = lcm_ram(a.ram, b.ram);
    if (a.ram != m) a = ms_with_ram(a, m);
    if (b.ram != m) b = ms_with_ram(b, m);
}

MatrixSeries operator+(const MatrixSeries& a0, const MatrixSeries& b0) {
    MatrixSeries a = a0, b = b0;
    unify(a, b);
    int lo = std::min(a.low, b.low);
    int hi = std::min(a.high, b.high);
    MatrixSeries r(a.n, a.ram, lo, hi);
    for (int k = lo; k <= hi; ++k) r.ref(k) = a.at(k) + b.at(k);
    return r;
}

MatrixSeries operator-(const MatrixSeries& a0, const MatrixSeries& b0) {
    MatrixSeries a = a0, b = b0;
    unify(a, b);
    int lo = std::min(a.low, b.low);
    int hi = std::min(a.high, b.high);
    MatrixSeries r(a.n, a.ram, lo, hi);
    for (int k = lo; k <= hi; ++k) r.ref(k) = a.at(k) - b.at(k);
    return r;
}

MatrixSeries operator*(const MatrixSeries& a0, const MatrixSeries& b0) {
    MatrixSeries a = a0, b = b0;
    unify(a, b);
    int lo = a.low + b.low;
    int hi = std::min(a.high + b.low, b.high + a.low);
    if (hi < lo) hi = lo;
    MatrixSeries r(a.n, a.ram, lo, hi);
    for (int i = a.low; i <= a.high; ++i)
        for (int j = b.low; j <= b.high && i + j <= hi; ++j) {
            if (i + j < lo) continue;
            r.ref(i + j) += a.at(i) * b.at(j);
        }
    return r;
}

MatrixSeries operator*(const PuiseuxSeries& s0, const MatrixSeries& a0) {
    MatrixSeries a = a0;
    PuiseuxSeries s = s0;
    int m = lcm_ram(s.ram, a.ram);
    if (s.ram != m) s = with_ramification(s, m);
    if (a.ram != m) a = ms_with_ram(a, m);
    int lo = s.low + a.low;
    int hi = std::min(s.high + a.low, a.high + s.low);
    MatrixSeries r(a.n, m, lo, hi);
    for (int i = s.low; i <= s.high; ++i)
        for (int j = a.low; j <= a.high && i + j <= hi; ++j) {
            if (i + j < lo || s.at(i) == cx(0.0)) continue;
            r.ref(i + j) += s.at(i) * a.at(j);
        }
    return r;
}

MatrixSeries operator*(cx s, const MatrixSeries& a) {
    MatrixSeries r = a;
    for (auto& mk : r.coef) mk *= s;
    return r;
}

MatrixSeries invert(const MatrixSeries& a) {
    int v = a.valuation();
    if (v > a.high) throw ZeroLeadingTerm();
    Eigen::MatrixXcd lead = a.at(v);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(lead);
    if (std::abs(lu.determinant()) < 1e-300) throw ZeroLeadingTerm();
    int nrel = a.high - v;
    // B solves A B = I order by order after factoring t^{v/m}
    std::vector<Eigen::MatrixXcd> b(static_cast<size_t>(nrel + 1));
    b[0] = lu.solve(Eigen::MatrixXcd::Identity(a.n, a.n));
    for (int k = 1; k <= nrel; ++k) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(a.n, a.n);
        for (int j = 0; j < k; ++j) acc += a.at(v + k - j) * b[static_cast<size_t>(j)];
        b[static_cast<size_t>(k)] = -lu.solve(acc);
    }
    MatrixSeries r(a.n, a.ram, -v, nrel - v);
    for (int k = 0; k <= nrel; ++k) r.ref(k - v) = b[static_cast<size_t>(k)];
    return r;
}

MatrixSeries phi_substitute(const MatrixSeries& a) {
    MatrixSeries r(a.n, a.ram, a.low, a.high);
    int m = a.ram;
    for (int k = a.low; k <= a.high; ++k) {
        double alpha = -static_cast<double>(k) / m;
        cx binom(1.0);
        for (int j = 0; k + j * m <= a.high; ++j) {
            if (j > 0) binom *= cx((alpha - (j - 1)) / j);
            r.ref(k + j * m) += binom * a.at(k);
        }
    }
    return r;
}

MatrixSeries kron(const MatrixSeries& a0, const MatrixSeries& b0) {
    MatrixSeries a = a0, b = b0;
    unify(a, b);
    int lo = a.low + b.low;
    int hi = std::min(a.high + b.low, b.high + a.low);
    MatrixSeries r(a.n * b.n, a.ram, lo, hi);
    for (int i = a.low; i <= a.high; ++i)
        for (int j = b.low; j <= b.high && i + j <= hi; ++j) {
            if (i + j < lo) continue;
            Eigen::MatrixXcd k1 = Eigen::kroneckerProduct(a.at(i), b.at(j));
            r.ref(i + j) += k1;
        }
    return r;
}

MatrixSeries transpose(const MatrixSeries& a) {
    MatrixSeries r = a;
    for (auto& mk : r.coef) mk = mk.transpose().eval();
    return r;
}

MatrixSeries matrix_power_1pt(const Eigen::MatrixXcd& G, int sign, int high, int m) {
    int n = static_cast<int>(G.rows());
    PuiseuxSeries L = log1p_series(high, m);
    MatrixSeries r = MatrixSeries::identity(n, m, high);
    Eigen::MatrixXcd gpow = Eigen::MatrixXcd::Identity(n, n);
    PuiseuxSeries lpow = ps_const(1.0, m, high);
    double fact = 1.0;
    for (int k = 1; k * m <= high; ++k) {
        gpow = (static_cast<double>(sign) * G) * gpow;
        lpow = lpow * L;
        PuiseuxSeries padded(m, 0, high);
        for (int q = std::max(lpow.low, 0); q <= std::min(lpow.high, high); ++q)
            padded.ref(q) = lpow.at(q);
        lpow = padded;
        fact *= k;
        MatrixSeries term(n, m, 0, high);
        for (int q = 0; q <= high; ++q) term.ref(q) = (lpow.at(q) / fact) * gpow;
        r = r + term;
    }
    return r;
}

bool approx_equal(const MatrixSeries& a0, const MatrixSeries& b0, double tol) {
    MatrixSeries a = a0, b = b0;
    unify(a, b);
    if (a.n != b.n) return false;
    int lo = std::min(a.low, b.low);
    int hi = std::min(a.high, b.high);
    double scale = 1.0 + std::max(a.max_abs(), b.max_abs());
    for (int k = lo; k <= hi; ++k)
        if ((a.at(k) - b.at(k)).cwiseAbs().maxCoeff() > tol * scale) return false;
    return true;
}

}  // namespace mildstokes
