#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "wellposed/measures.hpp"
#include "wellposed/rng.hpp"
#include "wellposed/transport.hpp"

using namespace wellposed;

namespace {

Distribution1D unif01() {
    return Distribution1D([](double) { return 1.0; }, {0.0, 1.0});
}

Distribution1D std_normal() {
    return Distribution1D([](double t) { return std::exp(-0.5 * t * t); }, {-kInf, kInf});
}

Distribution1D exp1() {
    return Distribution1D([](double t) { return std::exp(-t); }, {0.0, kInf});
}

} // namespace

TEST_CASE("cdf: uniform, normal, exponential") {
    CHECK(unif01().cdf(0.25) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(std_normal().cdf(0.0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(exp1().cdf(1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-8));

    auto d = unif01();
    CHECK(d.cdf(-1.0) == 0.0);
    CHECK(d.cdf(2.0) == 1.0);
}

TEST_CASE("quantile: closed forms and inverse property") {
    Distribution1D u02([](double) { return 1.0; }, {0.0, 2.0});
    CHECK(u02.quantile(0.5) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(std_normal().quantile(0.5)) < 1e-8);
    CHECK(exp1().quantile(1.0 - std::exp(-1.0)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("quantile composed with cdf is the identity") {
    auto check_dist = [](const Distribution1D& d) {
        for (double u : {0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
            double th = d.quantile(u);
            CHECK(d.cdf(th) == doctest::Approx(u).epsilon(1e-6));
        }
    };
    check_dist(unif01());
    check_dist(std_normal());
    check_dist(exp1());
}

TEST_CASE("median closed forms") {
    CHECK(unif01().median() == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(exp1().median() == doctest::Approx(std::log(2.0)).epsilon(1e-6));
    CHECK(std::abs(std_normal().median()) < 1e-8);
}

TEST_CASE("moments: uniform, normal, near-point-mass") {
    auto mu = unif01().moments();
    CHECK(mu.mean == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(mu.variance == doctest::Approx(1.0 / 12.0).epsilon(1e-8));

    auto mn = std_normal().moments();
    CHECK(std::abs(mn.mean) < 1e-9);
    CHECK(mn.variance == doctest::Approx(1.0).epsilon(1e-8));

    // sigma^2 = 1e-12 spike with a declared finite support
    Distribution1D spike(
        [](double t) { return std::exp(-0.5 * t * t / 1e-12); }, {-1e-3, 1e-3});
    CHECK(spike.moments().variance <= 1e-11);
}

TEST_CASE("sampling: determinism, support, narrow spike containment") {
    auto d = unif01();
    auto s1 = d.sample(3, 99);
    auto s2 = d.sample(3, 99);
    CHECK(s1 == s2); // bit-identical under equal seeds
    for (double v : s1) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
    auto s3 = d.sample(3, 100);
    CHECK(s1 != s3);

    Distribution1D narrow(
        [](double t) { return std::exp(-0.5 * (t - 5.0) * (t - 5.0) / 1e-8); },
        {4.99, 5.01});
    for (double v : narrow.sample(200, 7)) {
        CHECK(v > 4.99);
        CHECK(v < 5.01);
    }
}

TEST_CASE("sampling: variance of 1e5 standard normal draws") {
    auto d = std_normal();
    auto s = d.sample(100000, 20240905);
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= s.size();
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    var /= (s.size() - 1.0);
    CHECK(std::abs(var - 1.0) < 0.05);
    CHECK(std::abs(mean) < 4.0 / std::sqrt(100000.0)); // 4 standard errors
}

TEST_CASE("sampling: Kolmogorov-Smirnov below the 1% critical value") {
    auto d = exp1();
    const int n = 10000;
    for (std::uint64_t seed : {11ULL, 12ULL}) {
        auto s = d.sample(n, seed);
        std::sort(s.begin(), s.end());
        double ks = 0.0;
        for (int i = 0; i < n; ++i) {
            double f = d.cdf(s[i]);
            ks = std::max(ks, std::abs(f - (i + 1.0) / n));
            ks = std::max(ks, std::abs(f - i / static_cast<double>(n)));
        }
        CHECK(ks < 1.6276 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("empirical measure: normalization, ordering, quantile") {
    EmpiricalMeasure e({2.0, 0.0, 1.0}, {2.0, 1.0, 1.0});
    CHECK(e.size() == 3);
    CHECK(e.location(0) == 0.0);
    CHECK(e.location(2) == 2.0);
    double wsum = e.weight(0) + e.weight(1) + e.weight(2);
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(e.quantile(0.1) == 0.0);
    CHECK(e.quantile(0.3) == 1.0);
    CHECK(e.quantile(0.9) == 2.0);
    CHECK_THROWS(EmpiricalMeasure({0.0}, {-1.0}));
}

TEST_CASE("empirical measures converge to the sampled law in W1") {
    auto d = std_normal();
    Rng seeds(31);
    double avg[3] = {0.0, 0.0, 0.0};
    const int reps = 20;
    const int sizes[3] = {100, 1000, 10000};
    for (int r = 0; r < reps; ++r) {
        for (int k = 0; k < 3; ++k) {
            auto e = EmpiricalMeasure::from_samples(d.sample(sizes[k], seeds.next_u64()));
            avg[k] += wasserstein_1d(e, d, 1.0) / reps;
        }
    }
    CHECK(avg[0] > avg[1]);
    CHECK(avg[1] > avg[2]);
}

TEST_CASE("gaussian vec construction guards") {
    Eigen::MatrixXd good(2, 2);
    good << 2.0, 0.5, 0.5, 1.0;
    CHECK_NOTHROW(GaussianVec(Eigen::VectorXd::Zero(2), good));

    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.4, 0.1, 1.0;
    CHECK_THROWS(GaussianVec(Eigen::VectorXd::Zero(2), asym));

    Eigen::MatrixXd indef(2, 2);
    indef << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS(GaussianVec(Eigen::VectorXd::Zero(2), indef));
}
