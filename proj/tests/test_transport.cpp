#include <cmath>

#include "doctest.h"
#include "wellposed/measures.hpp"
#include "wellposed/rng.hpp"
#include "wellposed/transport.hpp"

using namespace wellposed;

namespace {

Distribution1D unif(double lo, double hi) {
    return Distribution1D([](double) { return 1.0; }, {lo, hi});
}

Distribution1D normal(double mean, double var) {
    return Distribution1D(
        [mean, var](double t) { return std::exp(-0.5 * (t - mean) * (t - mean) / var); },
        {-kInf, kInf});
}

EmpiricalMeasure random_empirical(Rng& rng, int max_atoms) {
    int n = 1 + static_cast<int>(rng.uniform() * max_atoms);
    std::vector<double> loc(n), w(n);
    for (int i = 0; i < n; ++i) {
        loc[i] = rng.uniform(-5.0, 5.0);
        w[i] = rng.uniform(0.05, 1.0);
    }
    return EmpiricalMeasure(loc, w);
}

} // namespace

TEST_CASE("tv_distance: identical, half-overlap, disjoint") {
    auto a = unif(0.0, 1.0);
    CHECK(tv_distance(a, a) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(tv_distance(a, unif(0.5, 1.5)) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(tv_distance(a, unif(2.0, 3.0)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("wasserstein_1d closed forms") {
    EmpiricalMeasure da({1.25}, {1.0}), db({-0.75}, {1.0});
    for (double p : {1.0, 2.0, 3.0})
        CHECK(wasserstein_1d(da, db, p) == doctest::Approx(2.0).epsilon(1e-12));

    CHECK(wasserstein_1d(unif(0.0, 1.0), unif(0.0, 2.0), 2.0) ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-8));

    CHECK(wasserstein_1d(normal(0.0, 1.0), normal(1.0, 1.0), 2.0) ==
          doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("W1 <= Wp and metric axioms on random empiricals") {
    Rng rng(2025);
    for (int rep = 0; rep < 40; ++rep) {
        auto a = random_empirical(rng, 6);
        auto b = random_empirical(rng, 6);
        auto c = random_empirical(rng, 6);
        double ab1 = wasserstein_1d(a, b, 1.0);
        double ab2 = wasserstein_1d(a, b, 2.0);
        CHECK(ab1 <= ab2 + 1e-10);
        CHECK(wasserstein_1d(b, a, 2.0) == doctest::Approx(ab2).epsilon(1e-10));
        CHECK(ab2 <= wasserstein_1d(a, c, 2.0) + wasserstein_1d(c, b, 2.0) + 1e-8);
        CHECK(wasserstein_1d(a, a, 2.0) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("Wp scales linearly under dilation") {
    Rng rng(77);
    for (int rep = 0; rep < 10; ++rep) {
        auto a = random_empirical(rng, 8);
        auto b = random_empirical(rng, 8);
        double c = rng.uniform(0.2, 4.0);
        std::vector<double> la, wa, lb, wb;
        for (std::size_t i = 0; i < a.size(); ++i) {
            la.push_back(c * a.location(i));
            wa.push_back(a.weight(i));
        }
        for (std::size_t i = 0; i < b.size(); ++i) {
            lb.push_back(c * b.location(i));
            wb.push_back(b.weight(i));
        }
        EmpiricalMeasure ac(la, wa), bc(lb, wb);
        CHECK(wasserstein_1d(ac, bc, 2.0) ==
              doctest::Approx(c * wasserstein_1d(a, b, 2.0)).epsilon(1e-8));
    }
}

TEST_CASE("ot_discrete exact: textbook instances") {
    auto a = DiscreteMeasure::points_1d({0.0, 1.0}, {0.5, 0.5});
    auto b = DiscreteMeasure::points_1d({0.0, 2.0}, {0.5, 0.5});
    // brute force over the two permutation couplings: min(0.5, 1.5) = 0.5
    CHECK(ot_discrete(a, b, 1.0).cost == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(ot_discrete(a, a, 2.0).cost == doctest::Approx(0.0).epsilon(1e-12));

    DiscreteMeasure p0, p1;
    p0.dim = 2;
    p0.coords = {0.0, 0.0};
    p0.weights = {1.0};
    p1.dim = 2;
    p1.coords = {3.0, 4.0};
    p1.weights = {1.0};
    CHECK(ot_discrete(p0, p1, 2.0).cost == doctest::Approx(5.0).epsilon(1e-12));

    auto bad = DiscreteMeasure::points_1d({0.0}, {0.5});
    CHECK_THROWS_AS(ot_discrete(a, bad, 1.0), Infeasible);
}

TEST_CASE("ot_discrete exact matches the quantile formula (oracle equivalence)") {
    Rng rng(424242);
    for (int rep = 0; rep < 200; ++rep) {
        auto a = random_empirical(rng, 8);
        auto b = random_empirical(rng, 8);
        double p = rep % 2 == 0 ? 1.0 : 2.0;
        double viaq = wasserstein_1d(a, b, p);
        double lp = ot_discrete(DiscreteMeasure::from_empirical(a),
                                DiscreteMeasure::from_empirical(b), p)
                        .cost;
        CHECK(std::abs(viaq - lp) < 1e-9);
    }
}

TEST_CASE("ot_discrete returns a feasible plan") {
    Rng rng(99);
    auto a = random_empirical(rng, 7);
    auto b = random_empirical(rng, 5);
    auto res = ot_discrete(DiscreteMeasure::from_empirical(a),
                           DiscreteMeasure::from_empirical(b), 2.0, OtMode::exact(),
                           /*want_plan=*/true);
    std::vector<double> row(a.size(), 0.0), col(b.size(), 0.0);
    for (const auto& e : res.plan) {
        CHECK(e.mass >= 0.0);
        row[e.i] += e.mass;
        col[e.j] += e.mass;
    }
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(row[i] == doctest::Approx(a.weight(i)).epsilon(1e-9));
    for (std::size_t j = 0; j < b.size(); ++j)
        CHECK(col[j] == doctest::Approx(b.weight(j)).epsilon(1e-9));
}

TEST_CASE("entropic mode lands within its declared tolerance of exact") {
    Rng rng(5);
    for (int rep = 0; rep < 3; ++rep) {
        auto a = random_empirical(rng, 8);
        auto b = random_empirical(rng, 8);
        auto exact = ot_discrete(DiscreteMeasure::from_empirical(a),
                                 DiscreteMeasure::from_empirical(b), 2.0);
        auto ent = ot_discrete(DiscreteMeasure::from_empirical(a),
                               DiscreteMeasure::from_empirical(b), 2.0,
                               OtMode::entropic(1e-3));
        CHECK(ent.solver_tag == "sinkhorn");
        CHECK(std::abs(ent.cost - exact.cost) <= ent.declared_tolerance);
    }
}

TEST_CASE("gaussian_w2: translations, scale, identity") {
    Eigen::MatrixXd id1 = Eigen::MatrixXd::Identity(1, 1);
    GaussianVec a(Eigen::VectorXd::Zero(1), id1);
    Eigen::VectorXd m1(1);
    m1 << 2.5;
    GaussianVec b(m1, id1);
    CHECK(gaussian_w2(a, b) == doctest::Approx(2.5).epsilon(1e-12));

    GaussianVec c(Eigen::VectorXd::Zero(1), 4.0 * id1);
    CHECK(gaussian_w2(a, c) == doctest::Approx(1.0).epsilon(1e-10)); // |1-2|
    CHECK(gaussian_w2(a, a) == doctest::Approx(0.0).epsilon(1e-12));

    Eigen::MatrixXd cov2(2, 2);
    cov2 << 2.0, 0.3, 0.3, 1.0;
    GaussianVec d2(Eigen::VectorXd::Zero(2), cov2);
    Eigen::VectorXd m2(2);
    m2 << 1.0, -1.0;
    GaussianVec e2(m2, cov2);
    CHECK(gaussian_w2(d2, e2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("gaussian_w2 agrees with the 1d quantile integral") {
    Rng rng(314159);
    for (int rep = 0; rep < 50; ++rep) {
        double m1 = rng.uniform(-2.0, 2.0), m2 = rng.uniform(-2.0, 2.0);
        double v1 = rng.uniform(0.2, 3.0), v2 = rng.uniform(0.2, 3.0);
        GaussianVec a((Eigen::VectorXd(1) << m1).finished(),
                      (Eigen::MatrixXd(1, 1) << v1).finished());
        GaussianVec b((Eigen::VectorXd(1) << m2).finished(),
                      (Eigen::MatrixXd(1, 1) << v2).finished());
        double closed = gaussian_w2(a, b);
        double viaq = wasserstein_1d(normal(m1, v1), normal(m2, v2), 2.0);
        CHECK(std::abs(closed - viaq) < 1e-6);
    }
}
