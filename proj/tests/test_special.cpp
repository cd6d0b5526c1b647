#include <doctest.h>

#include <random>

#include "mildstokes/special.hpp"

using namespace mildstokes;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("gamma at classical points") {
    CHECK(std::abs(gamma(cx(5.0)) - cx(24.0)) / 24.0 < 1e-13);
    CHECK(std::abs(gamma(cx(0.5)) - cx(std::sqrt(kPi))) < 1e-14);

    cx z(2.3, 0.7);
    CHECK(std::abs(gamma(z + 1.0) / gamma(z) - z) < 1e-12 * std::abs(z));

    CHECK_THROWS_AS(gamma(cx(-3.0)), PoleAt);
    CHECK_THROWS_AS(gamma(cx(0.0)), PoleAt);
}

TEST_CASE("recurrence over the strip") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dre(-50.0, 50.0), dim(-50.0, 50.0);
    int done = 0;
    while (done < 200) {
        cx s(dre(rng), dim(rng));
        if (s.real() < 0.5 && std::abs(s.imag()) < 0.2) {
            if (std::abs(s - std::round(s.real())) < 0.1) continue;
        }
        // distance from poles
        if (s.real() <= 0.5 && std::abs(s.imag()) < 0.1 &&
            std::abs(s.real() - std::round(s.real())) < 0.1)
            continue;
        ++done;
        cx g1 = log_gamma(s + 1.0);
        cx g0 = log_gamma(s);
        // compare in log space: log Gamma(s+1) - log Gamma(s) - log s in 2 pi i Z
        cx d = g1 - g0 - std::log(s);
        double re = d.real();
        double im = std::remainder(d.imag(), 2.0 * kPi);
        CHECK(std::abs(cx(re, im)) < 1e-12 * (1.0 + std::abs(g1)));
    }
}

TEST_CASE("log gamma along rays") {
    auto ray = log_gamma_ray(cx(10.0), 0.0, 3);
    for (const auto& e : ray) CHECK(std::abs(e.log_value.imag()) < 1e-14);

    auto ray2 = log_gamma_ray(cx(4.0, 3.0), 1.1, 40, 1.0);
    for (size_t k = 1; k < ray2.size(); ++k) {
        CHECK(std::abs(ray2[k].log_value.imag() - ray2[k - 1].log_value.imag()) < kPi);
        CHECK(std::abs(std::exp(ray2[k].log_value) - ray2[k].value) <
              1e-11 * std::abs(ray2[k].value));
    }

    // crossing the left half-plane without hitting poles
    auto ray3 = log_gamma_ray(cx(-8.0, 6.0), -kPi / 2.0, 12, 1.0);
    for (size_t k = 1; k < ray3.size(); ++k)
        CHECK(std::abs(ray3[k].log_value.imag() - ray3[k - 1].log_value.imag()) < kPi);

    CHECK_THROWS_AS(log_gamma_ray(cx(-3.0, 0.01), 0.0, 4), RayHitsPole);
}

TEST_CASE("reflection residual") {
    CHECK(reflection_residual(cx(0.5)) < 1e-12);
    CHECK(reflection_residual(cx(2.3, 0.7)) < 1e-10);
    CHECK(reflection_residual(cx(1.0 / 3.0)) < 1e-12);
    CHECK_THROWS_AS(reflection_residual(cx(2.0)), IntegerInput);

    std::mt19937 rng(9);
    std::uniform_real_distribution<double> dre(-8.0, 8.0), dim(-5.0, 5.0);
    int done = 0;
    while (done < 100) {
        cx s(dre(rng), dim(rng));
        if (std::abs(s.imag()) < 1e-3 && std::abs(s.real() - std::round(s.real())) < 0.05)
            continue;
        ++done;
        CHECK(reflection_residual(s) < 1e-10);
    }
}

TEST_CASE("stirling ratio decreases along the positive axis") {
    for (cx alpha : {cx(0.5, 0.0), cx(0.3, 0.2)}) {
        auto dev = [&](double R) {
            cx s(R, 0.0);
            cx ratio = std::exp(alpha * std::log(s) + log_gamma(s) - log_gamma(s + alpha));
            return std::abs(ratio - cx(1.0));
        };
        double prev = dev(10.0);
        for (double R = 14.0; R <= 80.0; R += 6.0) {
            double cur = dev(R);
            CHECK(cur < prev);
            prev = cur;
        }
        // halving within 30% when |s| doubles from 20 to 40
        double r20 = dev(20.0), r40 = dev(40.0);
        CHECK(r40 / r20 > 0.5 * 0.7);
        CHECK(r40 / r20 < 0.5 * 1.3);
    }
}
