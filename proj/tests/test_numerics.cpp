#include <cmath>

#include "doctest.h"
#include "wellposed/numerics.hpp"
#include "wellposed/rng.hpp"

using namespace wellposed;

namespace {

double poly_eval(const std::vector<double>& c, double t) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
}

double poly_integral_01(const std::vector<double>& c) {
    double acc = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) acc += c[k] / (k + 1.0);
    return acc;
}

} // namespace

TEST_CASE("integrate: constants and standard densities") {
    CHECK(integrate([](double) { return 1.0; }, {0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));

    double gauss = integrate(
        [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); },
        {-kInf, kInf});
    CHECK(std::abs(gauss - 1.0) < 1e-10);

    // Gamma(2) normalization on the half line
    double gamma2 = integrate([](double t) { return t * std::exp(-t); }, {0.0, kInf});
    CHECK(std::abs(gamma2 - 1.0) < 1e-9);

    auto res = integrate_full([](double t) { return t * t; }, {0.0, 2.0});
    CHECK(res.value == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
    CHECK(res.error_estimate < 1e-8);
}

TEST_CASE("integrate: error paths") {
    CHECK_THROWS_AS(integrate([](double t) { return 1.0 / t; }, {0.0, 1.0}), NonConvergent);
    CHECK_THROWS_AS(integrate([](double) { return std::nan(""); }, {0.0, 1.0}), NonFinite);
    QuadratureSpec tiny;
    tiny.max_subdivisions = 1;
    tiny.abs_tol = 1e-15;
    tiny.rel_tol = 1e-15;
    CHECK_THROWS_AS(integrate([](double t) { return std::exp(std::sin(9.0 * t) * 5.0); },
                              {0.0, 6.0}, tiny),
                    NonConvergent);
}

TEST_CASE("integrate is linear on random polynomials") {
    Rng rng(20240904);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> f(5), g(5);
        for (auto& c : f) c = rng.uniform(-2.0, 2.0);
        for (auto& c : g) c = rng.uniform(-2.0, 2.0);
        double a = rng.uniform(-3.0, 3.0), b = rng.uniform(-3.0, 3.0);
        double lhs = integrate(
            [&](double t) { return a * poly_eval(f, t) + b * poly_eval(g, t); }, {0.0, 1.0});
        double rhs = a * integrate([&](double t) { return poly_eval(f, t); }, {0.0, 1.0}) +
                     b * integrate([&](double t) { return poly_eval(g, t); }, {0.0, 1.0});
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        CHECK(lhs == doctest::Approx(a * poly_integral_01(f) + b * poly_integral_01(g))
                         .epsilon(1e-10));
    }
}

TEST_CASE("gradient_fd: quadratics, exponentials, constants") {
    auto sq = [](const std::vector<double>& v) { return v[0] * v[0]; };
    CHECK(std::abs(gradient_fd(sq, {3.0}, 1e-5)[0] - 6.0) < 1e-8);

    auto ex = [](const std::vector<double>& v) { return std::exp(v[0]); };
    CHECK(std::abs(gradient_fd(ex, {0.0})[0] - 1.0) < 1e-9);

    auto c7 = [](const std::vector<double>&) { return 7.0; };
    CHECK(gradient_fd(c7, {0.3})[0] == 0.0);

    auto bad = [](const std::vector<double>&) { return std::nan(""); };
    CHECK_THROWS_AS(gradient_fd(bad, {0.0}), NonFinite);
}

TEST_CASE("gradient_fd matches analytic polynomial gradients") {
    Rng rng(777);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> c(5);
        for (auto& ci : c) ci = rng.uniform(-1.5, 1.5);
        double x = rng.uniform(-1.0, 1.0);
        auto f = [&](const std::vector<double>& v) { return poly_eval(c, v[0]); };
        double analytic = 0.0;
        for (std::size_t k = 1; k < c.size(); ++k)
            analytic += k * c[k] * std::pow(x, static_cast<double>(k - 1));
        CHECK(std::abs(gradient_fd(f, {x})[0] - analytic) < 1e-6);
    }
}

TEST_CASE("poincare oracle: Gaussian and Lebesgue references") {
    double cg = poincare_constant_1d_numeric(
        [](double t) { return std::exp(-0.5 * t * t); }, {-8.0, 8.0}, 2000);
    CHECK(std::abs(cg - 1.0) < 1e-3);

    double c1 = poincare_constant_1d_numeric([](double) { return 1.0; }, {0.0, 1.0}, 2000);
    CHECK(std::abs(c1 - 1.0 / M_PI) < 1e-4);

    double c2 = poincare_constant_1d_numeric([](double) { return 1.0; }, {0.0, 2.0}, 2000);
    CHECK(std::abs(c2 - 2.0 / M_PI) < 1e-3);
}

TEST_CASE("poincare oracle scales linearly under dilation") {
    Rng rng(5150);
    for (int rep = 0; rep < 3; ++rep) {
        double w = rng.uniform(0.5, 3.0);
        double c = poincare_constant_1d_numeric([](double) { return 1.0; }, {0.0, w}, 1200);
        double c2 = poincare_constant_1d_numeric([](double) { return 1.0; }, {0.0, 2.0 * w}, 1200);
        CHECK(c2 / c == doctest::Approx(2.0).epsilon(1e-3));
    }
}

TEST_CASE("poincare oracle flags degenerate weights") {
    auto spike = [](double t) { return std::abs(t - 0.5) < 1e-4 ? 1.0 : 0.0; };
    CHECK_THROWS_AS(poincare_constant_1d_numeric(spike, {0.0, 1.0}, 2000), Degenerate);
}

TEST_CASE("poincare oracle truncates unbounded gaussian domains") {
    double cg = poincare_constant_1d_numeric(
        [](double t) { return std::exp(-0.5 * t * t); }, {-kInf, kInf}, 2000);
    CHECK(std::abs(cg - 1.0) < 1e-3);
}
