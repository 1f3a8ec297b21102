#include "wellposed/transport.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <Eigen/Dense>

namespace wellposed {

namespace {

// 4096-node Gauss-Legendre rule on (0,1), built once by Newton iteration
// on the Legendre recurrence.
struct GLRule {
    std::vector<double> x, w;
};

const GLRule& gl4096() {
    static GLRule rule = [] {
        const int n = 4096;
        GLRule r;
        r.x.resize(n);
        r.w.resize(n);
        for (int k = 0; k < n; ++k) {
            // root of P_n on (-1,1), then affine map to (0,1)
            double t = std::cos(M_PI * (k + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = t;
                for (int j = 2; j <= n; ++j) {
                    double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            r.x[k] = 0.5 * (t + 1.0);
            r.w[k] = 1.0 / ((1.0 - t * t) * dp * dp); // 2/((1-t^2)dp^2) scaled by 1/2
        }
        return r;
    }();
    return rule;
}

constexpr double kClip = 1e-9; // endpoint clip for quantile integrals

double pow_p(double base, double p) {
    if (p == 1.0) return base;
    if (p == 2.0) return base * base;
    return std::pow(base, p);
}

double euclid_cost(const DiscreteMeasure& a, const DiscreteMeasure& b,
                   std::size_t i, std::size_t j, double p) {
    double s = 0.0;
    const double* xa = a.point(i);
    const double* xb = b.point(j);
    for (int k = 0; k < a.dim; ++k) {
        double d = xa[k] - xb[k];
        s += d * d;
    }
    if (p == 2.0) return s;
    if (p == 1.0) return std::sqrt(s);
    return std::pow(s, 0.5 * p);
}

template <class QuantA, class QuantB>
double quantile_wp(const QuantA& qa, const QuantB& qb, double p) {
    if (!(p >= 1.0)) throw NumericError("wasserstein_1d: p must be >= 1");
    const GLRule& rule = gl4096();
    const double lo = kClip, hi = 1.0 - kClip;
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
        double u = lo + (hi - lo) * rule.x[k];
        double d = std::abs(qa(u) - qb(u));
        acc += rule.w[k] * pow_p(d, p);
    }
    acc *= (hi - lo);
    return std::pow(acc, 1.0 / p);
}

} // namespace

DiscreteMeasure DiscreteMeasure::points_1d(std::vector<double> locations,
                                           std::vector<double> weights) {
    DiscreteMeasure d;
    d.dim = 1;
    d.coords = std::move(locations);
    d.weights = std::move(weights);
    if (d.coords.size() != d.weights.size())
        throw NumericError("DiscreteMeasure: size mismatch");
    return d;
}

DiscreteMeasure DiscreteMeasure::from_empirical(const EmpiricalMeasure& e) {
    DiscreteMeasure d;
    d.dim = 1;
    d.coords.reserve(e.size());
    d.weights.reserve(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        d.coords.push_back(e.location(i));
        d.weights.push_back(e.weight(i));
    }
    return d;
}

double tv_distance(const Distribution1D& mu, const Distribution1D& nu) {
    Interval a = mu.cached_range(), b = nu.cached_range();
    Interval u{std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
    QuadratureSpec spec;
    spec.abs_tol = 1e-11;
    spec.rel_tol = 1e-9;
    spec.max_subdivisions = 4000; // |difference| has kinks
    double l1 = integrate(
        [&](double t) { return std::abs(mu.pdf(t) - nu.pdf(t)); }, u, spec);
    return std::clamp(0.5 * l1, 0.0, 1.0);
}

double wasserstein_1d(const Distribution1D& mu, const Distribution1D& nu, double p) {
    return quantile_wp([&](double u) { return mu.quantile(u); },
                       [&](double u) { return nu.quantile(u); }, p);
}

double wasserstein_1d(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double p) {
    if (!(p >= 1.0)) throw NumericError("wasserstein_1d: p must be >= 1");
    // exact sum over merged cumulative-weight breakpoints
    double acc = 0.0;
    std::size_t i = 0, j = 0;
    double ci = mu.weight(0), cj = nu.weight(0), prev = 0.0;
    while (true) {
        double next = std::min(ci, cj);
        acc += (next - prev) * pow_p(std::abs(mu.location(i) - nu.location(j)), p);
        prev = next;
        if (prev >= 1.0 - 1e-15) break;
        if (ci <= cj) {
            ++i;
            ci += i < mu.size() ? mu.weight(i) : 2.0;
            if (i >= mu.size()) { i = mu.size() - 1; ci = 2.0; }
        } else {
            ++j;
            cj += j < nu.size() ? nu.weight(j) : 2.0;
            if (j >= nu.size()) { j = nu.size() - 1; cj = 2.0; }
        }
    }
    return std::pow(acc, 1.0 / p);
}

double wasserstein_1d(const Distribution1D& mu, const EmpiricalMeasure& nu, double p) {
    return quantile_wp([&](double u) { return mu.quantile(u); },
                       [&](double u) { return nu.quantile(u); }, p);
}

double wasserstein_1d(const EmpiricalMeasure& mu, const Distribution1D& nu, double p) {
    return quantile_wp([&](double u) { return mu.quantile(u); },
                       [&](double u) { return nu.quantile(u); }, p);
}

namespace {

double logsumexp(const std::vector<double>& v) {
    double mx = -1e300;
    for (double x : v) mx = std::max(mx, x);
    if (mx <= -1e299) return -1e300;
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

// sharp (plan-weighted) entropic transport cost at regularization eps
double sinkhorn_sharp(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      double p, double eps_final, int max_iter) {
    const std::size_t n = mu.size(), m = nu.size();
    std::vector<double> la(n), lb(m), f(n, 0.0), g(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) la[i] = std::log(mu.weights[i]);
    for (std::size_t j = 0; j < m; ++j) lb[j] = std::log(nu.weights[j]);

    auto cost = [&](std::size_t i, std::size_t j) { return euclid_cost(mu, nu, i, j, p); };

    std::vector<double> buf(std::max(n, m));
    int used = 0;
    for (double eps = 1.0;; eps = std::max(eps * 0.5, eps_final)) {
        for (int it = 0; it < 500; ++it) {
            for (std::size_t i = 0; i < n; ++i) {
                buf.resize(m);
                for (std::size_t j = 0; j < m; ++j)
                    buf[j] = lb[j] + (g[j] - cost(i, j)) / eps;
                f[i] = -eps * logsumexp(buf);
            }
            double err = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                buf.resize(n);
                for (std::size_t i = 0; i < n; ++i)
                    buf[i] = la[i] + (f[i] - cost(i, j)) / eps;
                double gj = -eps * logsumexp(buf);
                err = std::max(err, std::abs(gj - g[j]));
                g[j] = gj;
            }
            ++used;
            if (used > max_iter)
                throw NonConvergent("sinkhorn: iteration limit reached");
            if (err < 1e-10 * eps) break;
        }
        if (eps <= eps_final) break;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double lp = la[i] + lb[j] + (f[i] + g[j] - cost(i, j)) / eps_final;
            total += std::exp(lp) * cost(i, j);
        }
    return total;
}

} // namespace

TransportPlanResult ot_discrete(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                double p, OtMode mode, bool want_plan) {
    if (!(p >= 1.0)) throw NumericError("ot_discrete: p must be >= 1");
    if (mu.dim != nu.dim) throw NumericError("ot_discrete: dimension mismatch");
    double sa = 0.0, sb = 0.0;
    for (double w : mu.weights) sa += w;
    for (double w : nu.weights) sb += w;
    if (std::abs(sa - 1.0) > 1e-9 || std::abs(sb - 1.0) > 1e-9)
        throw Infeasible("ot_discrete: weights must each sum to one");

    TransportPlanResult res;
    if (mode.kind == OtMode::Exact) {
        auto cost = [&](int i, int j) {
            return euclid_cost(mu, nu, static_cast<std::size_t>(i),
                               static_cast<std::size_t>(j), p);
        };
        detail::TransportSimplex<decltype(cost)> solver(mu.weights, nu.weights, cost);
        double total = solver.solve(want_plan ? &res.plan : nullptr);
        res.cost = std::pow(std::max(total, 0.0), 1.0 / p);
        res.solver_tag = "exact_lp";
    } else {
        double ab = sinkhorn_sharp(mu, nu, p, mode.epsilon, mode.max_iterations);
        double aa = sinkhorn_sharp(mu, mu, p, mode.epsilon, mode.max_iterations);
        double bb = sinkhorn_sharp(nu, nu, p, mode.epsilon, mode.max_iterations);
        double debiased = std::max(ab - 0.5 * (aa + bb), 0.0);
        res.cost = std::pow(debiased, 1.0 / p);
        res.solver_tag = "sinkhorn";
        double cmax = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i)
            cmax = std::max(cmax, euclid_cost(mu, nu, i, 0, p));
        res.declared_tolerance = 20.0 * mode.epsilon * (1.0 + cmax);
    }
    return res;
}

double gaussian_w2(const GaussianVec& a, const GaussianVec& b) {
    if (a.dim() != b.dim()) throw NumericError("gaussian_w2: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esb(b.covariance);
    if (esb.info() != Eigen::Success)
        throw NumericalFailure("gaussian_w2: eigensolve of covariance failed");
    Eigen::VectorXd ev = esb.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXd rb = esb.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
                         esb.eigenvectors().transpose();
    Eigen::MatrixXd mid = rb * a.covariance * rb;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esm(mid);
    if (esm.info() != Eigen::Success)
        throw NumericalFailure("gaussian_w2: eigensolve of mixed matrix failed");
    double cross = esm.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    double t = (a.mean - b.mean).squaredNorm() + a.covariance.trace() +
               b.covariance.trace() - 2.0 * cross;
    return std::sqrt(std::max(t, 0.0));
}

} // namespace wellposed
