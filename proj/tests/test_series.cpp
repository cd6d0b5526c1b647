#include <doctest.h>

#include <random>

#include "mildstokes/series.hpp"

using namespace mildstokes;

namespace {

PuiseuxSeries random_series(std::mt19937& rng, int m, int low, int high) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    PuiseuxSeries f(m, low, high);
    for (int k = low; k <= high; ++k) f.ref(k) = cx(d(rng), d(rng));
    return f;
}

}  // namespace

TEST_CASE("series addition and multiplication basics") {
    PuiseuxSeries t = ps_monomial(1.0, 1);
    PuiseuxSeries one = ps_const(1.0);

    PuiseuxSeries sum = t + one;
    CHECK(std::abs(sum.at(0) - cx(1.0)) < 1e-15);
    CHECK(std::abs(sum.at(1) - cx(1.0)) < 1e-15);

    PuiseuxSeries tinv = ps_monomial(1.0, -1);
    PuiseuxSeries prod = t * tinv;
    CHECK(approx_equal(prod, ps_const(1.0, 1, prod.high)));

    // (1+t)(1-t+t^2-t^3) = 1 + O(t^4), window K=3
    PuiseuxSeries a(1, 0, 3), b(1, 0, 3);
    a.ref(0) = 1.0;
    a.ref(1) = 1.0;
    b.ref(0) = 1.0;
    b.ref(1) = -1.0;
    b.ref(2) = 1.0;
    b.ref(3) = -1.0;
    PuiseuxSeries p = a * b;
    CHECK(std::abs(p.at(0) - cx(1.0)) < 1e-15);
    for (int k = 1; k <= p.high; ++k) CHECK(std::abs(p.at(k)) < 1e-15);
}

TEST_CASE("series inversion") {
    PuiseuxSeries onept = ps_const(1.0);
    onept.ref(1) = 1.0;
    PuiseuxSeries inv = invert(onept);
    for (int k = 0; k <= 3; ++k) CHECK(std::abs(inv.at(k) - cx(k % 2 ? -1.0 : 1.0)) < 1e-15);

    CHECK(std::abs(invert(ps_const(2.0)).at(0) - cx(0.5)) < 1e-15);

    // t(1+t): multiply-back oracle
    PuiseuxSeries f = ps_monomial(1.0, 1);
    f.ref(2) = 1.0;
    PuiseuxSeries g = invert(f);
    CHECK(g.low == -1);
    CHECK(approx_equal(f * g, ps_const(1.0, 1, (f * g).high)));

    CHECK_THROWS_AS(invert(PuiseuxSeries(1, 0, 4)), ZeroLeadingTerm);
}

TEST_CASE("phi substitution") {
    PuiseuxSeries t = ps_monomial(1.0, 1, 1, 4);
    PuiseuxSeries pt = phi_substitute(t);  // t/(1+t) = t - t^2 + t^3 - t^4
    for (int k = 1; k <= 4; ++k) CHECK(std::abs(pt.at(k) - cx(k % 2 ? 1.0 : -1.0)) < 1e-15);

    PuiseuxSeries s = ps_monomial(1.0, -1);
    PuiseuxSeries ps = phi_substitute(s);  // (1+t)/t = t^{-1} + 1
    CHECK(std::abs(ps.at(-1) - cx(1.0)) < 1e-15);
    CHECK(std::abs(ps.at(0) - cx(1.0)) < 1e-15);
    for (int k = 1; k <= ps.high; ++k) CHECK(std::abs(ps.at(k)) < 1e-15);

    CHECK(approx_equal(phi_substitute(ps_const(1.0)), ps_const(1.0)));
}

TEST_CASE("phi is a ring homomorphism and invertible") {
    std::mt19937 rng(71);
    for (int rep = 0; rep < 10; ++rep) {
        PuiseuxSeries f = random_series(rng, 2, -2, 12);
        PuiseuxSeries g = random_series(rng, 2, 0, 12);
        CHECK(approx_equal(phi_substitute(f * g), phi_substitute(f) * phi_substitute(g), 1e-10));
        CHECK(approx_equal(phi_substitute(f + g), phi_substitute(f) + phi_substitute(g), 1e-12));
        CHECK(approx_equal(phi_inverse_substitute(phi_substitute(f)), f, 1e-10));
    }
}

TEST_CASE("ring laws on random operands") {
    std::mt19937 rng(13);
    for (int rep = 0; rep < 10; ++rep) {
        PuiseuxSeries f = random_series(rng, 1, 0, 14);
        PuiseuxSeries g = random_series(rng, 2, -1, 20);
        PuiseuxSeries h = random_series(rng, 1, 0, 14);
        CHECK(approx_equal((f * g) * h, f * (g * h), 1e-11));
        CHECK(approx_equal(f * (g + h), f * g + f * h, 1e-11));
        CHECK(approx_equal(f + g, g + f));
    }
}

TEST_CASE("log1p and exp") {
    PuiseuxSeries l3 = log1p_series(3);
    CHECK(std::abs(l3.at(1) - cx(1.0)) < 1e-15);
    CHECK(std::abs(l3.at(2) - cx(-0.5)) < 1e-15);
    CHECK(std::abs(l3.at(3) - cx(1.0 / 3.0)) < 1e-15);

    PuiseuxSeries l1 = log1p_series(1);
    CHECK(std::abs(l1.at(1) - cx(1.0)) < 1e-15);

    // exp-series oracle computed with an independent Taylor loop
    PuiseuxSeries L = log1p_series(12);
    PuiseuxSeries expL = ps_const(1.0, 1, 12);
    PuiseuxSeries term = ps_const(1.0, 1, 12);
    for (int n = 1; n <= 12; ++n) {
        term = (cx(1.0 / n)) * (term * L);
        PuiseuxSeries pad(1, 0, 12);
        for (int k = 0; k <= std::min(12, term.high); ++k) pad.ref(k) = term.at(k);
        term = pad;
        expL = expL + term;
    }
    PuiseuxSeries expected = ps_const(1.0, 1, 12);
    expected.ref(1) = 1.0;
    CHECK(approx_equal(expL, expected, 1e-12));
    CHECK(approx_equal(exp_series(L), expected, 1e-12));
    CHECK(approx_equal(log_series(expected), L, 1e-12));
}

TEST_CASE("matrix power of 1+t") {
    Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(2, 2);
    MatrixSeries I2 = matrix_power_1pt(Z, -1, 8);
    CHECK(approx_equal(I2, MatrixSeries::identity(2, 1, 8)));

    Eigen::MatrixXcd N(2, 2);
    N << 0, 1, 0, 0;
    MatrixSeries P = matrix_power_1pt(N, -1, 2);
    CHECK(std::abs(P.at(0)(0, 0) - cx(1.0)) < 1e-15);
    CHECK(std::abs(P.at(1)(0, 1) - cx(-1.0)) < 1e-15);
    CHECK(std::abs(P.at(2)(0, 1) - cx(0.5)) < 1e-15);
    CHECK(std::abs(P.at(1)(1, 0)) < 1e-15);

    // scalar gamma: binomial-expansion oracle
    cx gamma(0.7, -0.3);
    Eigen::MatrixXcd G(1, 1);
    G(0, 0) = gamma;
    MatrixSeries B = matrix_power_1pt(G, -1, 10);
    cx binom = 1.0;
    for (int n = 0; n <= 10; ++n) {
        if (n > 0) binom *= (-gamma - cx(n - 1.0)) / cx(static_cast<double>(n));
        CHECK(std::abs(B.at(n)(0, 0) - binom) < 1e-12);
    }

    // sign-flipped product is the identity
    Eigen::MatrixXcd M(2, 2);
    M << cx(0.3, 0.1), cx(-0.2, 0.0), cx(0.5, -0.4), cx(0.1, 0.2);
    CHECK(approx_equal(matrix_power_1pt(M, -1, 12) * matrix_power_1pt(M, 1, 12),
                       MatrixSeries::identity(2, 1, 12), 1e-12));
}

TEST_CASE("matrix series inverse and phi") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(-0.5, 0.5);
    MatrixSeries A(3, 1, 0, 10);
    for (int k = 0; k <= 10; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) A.ref(k)(i, j) = cx(d(rng), d(rng));
    A.ref(0) += 2.0 * Eigen::MatrixXcd::Identity(3, 3);
    MatrixSeries B = invert(A);
    CHECK(approx_equal(A * B, MatrixSeries::identity(3, 1, (A * B).high), 1e-11));

    // phi on matrices agrees with entrywise phi
    MatrixSeries PA = phi_substitute(A);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(approx_equal(PA.entry(i, j), phi_substitute(A.entry(i, j)), 1e-12));
}

TEST_CASE("ramification unification and cap") {
    PuiseuxSeries half = ps_monomial(1.0, 1, 2, 8);   // t^{1/2}
    PuiseuxSeries third = ps_monomial(1.0, 1, 3, 12); // t^{1/3}
    PuiseuxSeries p = half * third;                   // t^{5/6} on the lcm grid
    CHECK(p.ram == 6);
    CHECK(std::abs(p.at(5) - cx(1.0)) < 1e-15);

    PuiseuxSeries five = ps_monomial(1.0, 1, 5, 10);
    PuiseuxSeries seven = ps_monomial(1.0, 1, 7, 14);
    CHECK_THROWS_AS(five * seven, RamificationCapExceeded);

    // zero series compare equal regardless of window
    PuiseuxSeries z1(1, -3, 4), z2(2, 0, 9);
    CHECK(approx_equal(z1, z2));
}

TEST_CASE("series evaluation with branch") {
    PuiseuxSeries f = ps_const(1.0, 2, 8);
    f.ref(1) = cx(0.0, 2.0);  // 1 + 2i t^{1/2}
    double r = 0.04;
    cx v = f.eval(r, 0.0);
    CHECK(std::abs(v - (cx(1.0) + cx(0.0, 2.0) * std::sqrt(r))) < 1e-14);
    // opposite branch of the square root
    cx w = f.eval(r, 2.0 * 3.14159265358979323846);
    CHECK(std::abs(w - (cx(1.0) - cx(0.0, 2.0) * std::sqrt(r))) < 1e-13);
}
