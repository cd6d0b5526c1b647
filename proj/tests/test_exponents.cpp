#include <doctest.h>

#include <random>

#include "mildstokes/exponents.hpp"

using namespace mildstokes;

namespace {
constexpr double kPi = 3.14159265358979323846;

Exponent ramified(int m, std::initializer_list<cx> coeffs) {
    Exponent a(m);
    int l = 1;
    for (cx c : coeffs) a.c[static_cast<size_t>(l++) - 1] = c;
    return a;
}
}  // namespace

TEST_CASE("growth classes along rays") {
    CHECK(growth_class(Exponent::linear(-1.0), 0.0) == GrowthClass::RapidDecay);
    CHECK(growth_class(Exponent::linear(cx(0.0, 2.0 * kPi)), kPi / 2.0) ==
          GrowthClass::RapidDecay);
    // m=2, c_1 = 1: Re(e^{i pi/2}) = 0
    CHECK(growth_class(ramified(2, {1.0, 0.0}), kPi) == GrowthClass::Moderate);
    CHECK(growth_class(Exponent(), 1.0) == GrowthClass::Moderate);
}

TEST_CASE("order relations on arcs") {
    Arc U(-1.0, 1.0);  // sigma range (-1, 1)
    CHECK(leq(Exponent::linear(-1.0), Exponent(), U));
    CHECK(lt(Exponent::linear(-1.0), Exponent(), U));

    Arc Usmall(-0.1, 0.1);
    CHECK_FALSE(leq(Exponent::linear(cx(0.0, 2.0 * kPi)), Exponent(), Usmall));

    // a-b = s^{1/2} on the arc with sigma range (pi-0.1, pi): moderate at the
    // endpoint limit, not rapid anywhere near pi
    Arc Unear(-kPi, -(kPi - 0.1));
    Exponent h = ramified(2, {1.0, 0.0});
    // direct Re evaluation oracle on sampled rays
    for (double sg = kPi - 0.095; sg < kPi; sg += 0.01) {
        CHECK(h.eval(100.0, sg).real() < 1e-9 * 100.0);
    }
    CHECK(leq(h, Exponent(2), Unear));
    CHECK_FALSE(lt(h, Exponent(2), Unear));
}

TEST_CASE("order relation properties") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    std::uniform_real_distribution<double> ang(0.2, 2.5);
    for (int rep = 0; rep < 60; ++rep) {
        int m = 1 + rep % 3;
        auto rnd = [&](int mm) {
            Exponent a(mm);
            for (auto& c : a.c) c = cx(d(rng), d(rng));
            return a;
        };
        Exponent a = rnd(m), b = rnd(m), c = rnd(1 + (rep / 3) % 2);
        double t0 = d(rng);
        Arc U(t0, t0 + ang(rng));
        CHECK(leq(a, a, U));
        if (leq(a, b, U) && leq(b, c, U)) CHECK(leq(a, c, U));
        if (lt(a, b, U)) {
            CHECK(leq(a, b, U));
            CHECK_FALSE(leq(b, a, U));
        }
        // translation invariance
        CHECK(leq(a, b, U) == leq(a + c, b + c, U));
        CHECK(lt(a, b, U) == lt(a + c, b + c, U));
    }
}

TEST_CASE("stokes directions") {
    auto dirs = stokes_directions(Exponent::linear(1.0), Exponent(1));
    REQUIRE(dirs.size() == 2);
    CHECK(dirs[0].sigma == doctest::Approx(-kPi / 2.0));
    CHECK(dirs[1].sigma == doctest::Approx(kPi / 2.0));

    // root-finding oracle for cos sigma - sin sigma = 0 on (-pi, pi]
    auto dirs2 = stokes_directions(Exponent::linear(cx(1.0, 1.0)), Exponent(1));
    std::vector<double> roots;
    for (double lo = -kPi; lo < kPi; lo += 0.01) {
        double hi = lo + 0.01;
        auto f = [](double x) { return std::cos(x) - std::sin(x); };
        if (f(lo) * f(hi) <= 0.0 && f(lo) != f(hi)) {
            double a = lo, b = hi;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (a + b);
                (f(a) * f(mid) <= 0.0 ? b : a) = mid;
            }
            roots.push_back(0.5 * (a + b));
        }
    }
    REQUIRE(dirs2.size() == roots.size());
    std::sort(roots.begin(), roots.end());
    for (size_t i = 0; i < roots.size(); ++i)
        CHECK(dirs2[i].sigma == doctest::Approx(roots[i]).epsilon(1e-6));

    // ramified boundary pair at sigma = pi
    auto dirs3 = stokes_directions(ramified(2, {1.0, 0.0}), Exponent(2));
    REQUIRE(dirs3.size() == 1);
    CHECK(dirs3[0].sigma == doctest::Approx(kPi));

    CHECK_THROWS_AS(stokes_directions(Exponent::linear(1.0), Exponent::linear(1.0)),
                    EqualExponents);
}

TEST_CASE("stokes directions partition the circle into constant classes") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        int m = 1 + rep % 3;
        Exponent a(m);
        for (auto& c : a.c) c = cx(d(rng), d(rng));
        if (a.is_zero()) continue;
        auto dirs = stokes_directions(a, Exponent(m));
        if (dirs.empty()) continue;
        for (size_t i = 0; i + 1 < dirs.size(); ++i) {
            double lo = dirs[i].sigma, hi = dirs[i + 1].sigma;
            GrowthClass cls = growth_class(a, 0.5 * (lo + hi));
            for (double x = lo + 1e-4; x < hi; x += (hi - lo) / 7.0)
                CHECK(growth_class(a, x) == cls);
        }
    }
}

TEST_CASE("shift and canonical representatives") {
    Exponent zero;
    Exponent shifted = shift(zero, 1);
    CHECK(std::abs(shifted.top() - cx(0.0, 2.0 * kPi)) < 1e-15);
    CHECK(approx_equal(shift(shifted, -1), zero));
    CHECK(orbit_equal(shifted, zero));
    CHECK_FALSE(approx_equal(shifted, zero));

    Exponent a = Exponent::linear(cx(0.3, 1.1));
    auto [canon, off] = canonicalize(shift(a, 5));
    CHECK(off == 5);
    CHECK(is_canonical(canon));
    CHECK(approx_equal(canon, a));

    // boundary Im = pi stays put
    Exponent b = Exponent::linear(cx(0.0, kPi));
    CHECK(is_canonical(b));
    CHECK(canonicalize(b).second == 0);

    // shift coherence with growth classification
    for (double sg : {0.3, -0.8, 2.0}) {
        Exponent direct = a + Exponent::linear(cx(0.0, 2.0 * kPi * 3.0));
        CHECK(growth_class(shift(a, 3), sg) == growth_class(direct, sg));
    }
}

TEST_CASE("mu action") {
    Exponent a = ramified(2, {1.0, 0.0});  // tau^{-1}
    Exponent b = mu_action(-1.0, a);
    CHECK(std::abs(b.c[0] + cx(1.0)) < 1e-15);

    CHECK(approx_equal(mu_action(1.0, a), a));

    Exponent s3 = ramified(3, {0.0, 0.0, 1.0});  // tau^{-3} = s
    CHECK(approx_equal(mu_action(std::exp(cx(0.0, 2.0 * kPi / 3.0)), s3), s3));

    CHECK_THROWS_AS(mu_action(cx(0.5, 0.0), a), NotRootOfUnity);
}

TEST_CASE("arcs") {
    Arc a(-0.2, 0.2);
    CHECK(a.contains_one());
    CHECK_FALSE(a.contains_minus_one());
    Arc b(3.0, 3.5);
    CHECK(b.contains_minus_one());
    CHECK_FALSE(b.contains_one());
    CHECK_THROWS_AS(Arc(0.0, 7.0), FullCircleArc);
    CHECK_THROWS_AS(Arc(1.0, 1.0), FullCircleArc);
}

TEST_CASE("numeric oracle agreement on sampled rays") {
    // reduced-size version of the acceptance sweep
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> mag(0.3, 2.0);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> raydist(-kPi, kPi);
    int done = 0;
    while (done < 25) {
        int m = 1 + (done % 3);
        Exponent a(m), b(m);
        for (auto& c : a.c) c = mag(rng) * std::exp(cx(0.0, ph(rng)));
        for (auto& c : b.c) c = mag(rng) * std::exp(cx(0.0, ph(rng)));
        double sg = raydist(rng);
        Exponent d = a - b;
        // keep a healthy margin from the boundary directions
        int ltop = m;
        while (ltop > 1 && std::abs(d.c[static_cast<size_t>(ltop - 1)]) < 0.05) --ltop;
        double re = (d.c[static_cast<size_t>(ltop - 1)] * std::exp(cx(0.0, sg * ltop / m))).real();
        if (std::abs(re) < 0.25) continue;
        ++done;

        GrowthClass sym = growth_class(d, sg);
        double L20 = d.eval(20.0, sg).real();
        double L160 = d.eval(160.0, sg).real();
        GrowthClass emp = (L160 - L20 > 0.3) ? GrowthClass::Growth
                          : (L160 - L20 < -0.3) ? GrowthClass::RapidDecay
                                                : GrowthClass::Moderate;
        CHECK(sym == emp);
    }
}
