#include "wellposed/models.hpp"

#include <algorithm>
#include <cmath>

namespace wellposed {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kLogEvidenceFloor = -690.77552789821368; // log(1e-300)

double tgamma_int(int m) {
    double g = 1.0;
    for (int k = 2; k < m; ++k) g *= k;
    return g; // (m-1)!
}

} // namespace

PosteriorKernel::PosteriorKernel(StatModel1D model, Prior prior)
    : model_(std::move(model)), prior_(std::move(prior)) {
    QuadratureSpec spec;
    spec.max_subdivisions = 400;
    double mass = integrate(prior_.density, prior_.support, spec);
    if (!(mass > 0.0)) throw Degenerate("PosteriorKernel: prior has no mass");
    log_prior_mass_ = std::log(mass);
}

Interval PosteriorKernel::support_at(std::span<const double> x) const {
    Interval s{std::max(prior_.support.lo, model_.param_space.lo),
               std::min(prior_.support.hi, model_.param_space.hi)};
    if (model_.support_lo) s.lo = std::max(s.lo, model_.support_lo(x));
    if (model_.support_hi) s.hi = std::min(s.hi, model_.support_hi(x));
    if (!(s.lo < s.hi))
        throw ZeroEvidence("posterior: empty positivity set at this data point");
    return s;
}

Distribution1D PosteriorKernel::from_logpost(const std::function<double(double)>& logpost,
                                             Interval supp) const {
    // log-domain shift: coarse max scan keeps the exponential in range
    double shift = -kInf;
    detail::DomainMap m = detail::map_domain(supp);
    const int g = 512;
    for (int i = 0; i < g; ++i) {
        double t = m.t_lo + (m.t_hi - m.t_lo) * (i + 0.5) / g;
        shift = std::max(shift, logpost(m.theta(t)));
    }
    if (!std::isfinite(shift))
        throw ZeroEvidence("posterior: likelihood x prior vanishes on the scan grid");
    auto dens = [logpost, shift](double th) {
        double lp = logpost(th);
        return std::isfinite(lp) ? std::exp(lp - shift) : 0.0;
    };
    Distribution1D post(dens, supp);
    double log_ev = std::log(post.normalizer()) + shift - log_prior_mass_;
    if (log_ev < kLogEvidenceFloor)
        throw ZeroEvidence("posterior: evidence below the 1e-300 floor");
    return post;
}

Distribution1D PosteriorKernel::posterior(std::span<const double> x) const {
    Interval supp = support_at(x);
    std::vector<double> xv(x.begin(), x.end());
    auto lp = [this, xv](double th) {
        double q = prior_.density(th);
        if (!(q > 0.0)) return -kInf;
        return model_.log_likelihood(std::span<const double>(xv), th) + std::log(q);
    };
    return from_logpost(lp, supp);
}

Distribution1D PosteriorKernel::posterior_n(std::span<const double> xs) const {
    if (model_.data_dim != 1)
        throw NumericError("posterior_n: needs a scalar-observation model");
    if (xs.empty()) throw NumericError("posterior_n: empty sample");

    Interval supp{std::max(prior_.support.lo, model_.param_space.lo),
                  std::min(prior_.support.hi, model_.param_space.hi)};
    for (double xi : xs) {
        std::span<const double> one(&xi, 1);
        if (model_.support_lo) supp.lo = std::max(supp.lo, model_.support_lo(one));
        if (model_.support_hi) supp.hi = std::min(supp.hi, model_.support_hi(one));
    }
    if (!(supp.lo < supp.hi))
        throw ZeroEvidence("posterior_n: empty positivity set for this sample");

    if (model_.expfam) {
        // product likelihood collapses onto the sufficient statistic
        const auto& ef = *model_.expfam;
        double tbar = 0.0;
        for (double xi : xs) tbar += ef.T(xi);
        tbar /= static_cast<double>(xs.size());
        double n = static_cast<double>(xs.size());
        auto lp = [this, &ef, tbar, n](double th) {
            double q = prior_.density(th);
            if (!(q > 0.0)) return -kInf;
            return n * (tbar * th - ef.M(th)) + std::log(q);
        };
        return from_logpost(lp, supp);
    }

    std::vector<double> data(xs.begin(), xs.end());
    auto lp = [this, data](double th) {
        double q = prior_.density(th);
        if (!(q > 0.0)) return -kInf;
        double s = std::log(q);
        for (double xi : data)
            s += model_.log_likelihood(std::span<const double>(&xi, 1), th);
        return s;
    };
    return from_logpost(lp, supp);
}

double PosteriorKernel::log_evidence(std::span<const double> x) const {
    Interval supp = support_at(x);
    std::vector<double> xv(x.begin(), x.end());
    auto lp = [this, xv](double th) {
        double q = prior_.density(th);
        if (!(q > 0.0)) return -kInf;
        return model_.log_likelihood(std::span<const double>(xv), th) + std::log(q);
    };
    double shift = -kInf;
    detail::DomainMap m = detail::map_domain(supp);
    for (int i = 0; i < 512; ++i) {
        double t = m.t_lo + (m.t_hi - m.t_lo) * (i + 0.5) / 512.0;
        shift = std::max(shift, lp(m.theta(t)));
    }
    if (!std::isfinite(shift))
        throw ZeroEvidence("log_evidence: integrand vanishes on the scan grid");
    QuadratureSpec spec;
    spec.max_subdivisions = 800;
    double mass = integrate(
        [&](double th) {
            double v = lp(th);
            return std::isfinite(v) ? std::exp(v - shift) : 0.0;
        },
        supp, spec);
    if (!(mass > 0.0)) throw ZeroEvidence("log_evidence: zero mass");
    double log_ev = std::log(mass) + shift - log_prior_mass_;
    if (log_ev < kLogEvidenceFloor)
        throw ZeroEvidence("log_evidence: evidence below the 1e-300 floor");
    return log_ev;
}

void validate_model(const StatModel1D& model, int theta_grid, double tol) {
    if (model.data_dim != 1) return; // vector-data builtins are checked analytically
    QuadratureSpec spec;
    spec.max_subdivisions = 2000;
    Interval th_range{std::max(model.param_space.lo, -20.0),
                      std::min(model.param_space.hi, 20.0)};
    for (int i = 1; i <= theta_grid; ++i) {
        double th = th_range.lo + th_range.width() * i / (theta_grid + 1);
        double mass = integrate(
            [&](double x) {
                double l = model.log_likelihood(std::span<const double>(&x, 1), th);
                return std::isfinite(l) ? std::exp(l) : 0.0;
            },
            model.data_domain, spec);
        if (std::abs(mass - 1.0) > tol)
            throw NumericError("model '" + model.name + "' likelihood mass " +
                               std::to_string(mass) + " at theta=" + std::to_string(th));
    }
}

StatModel1D gaussian_location_model() {
    StatModel1D m;
    m.name = "gaussian_location";
    m.data_dim = 1;
    m.log_likelihood = [](std::span<const double> x, double th) {
        double d = x[0] - th;
        return -0.5 * d * d - 0.5 * kLog2Pi;
    };
    m.grad_x_log_likelihood = [](std::span<const double> x, double th) {
        return std::vector<double>{th - x[0]};
    };
    m.data_domain = {-kInf, kInf};
    m.data_space = {{-3.0}, {3.0}};
    m.param_space = {-kInf, kInf};
    ExpFamilySpec ef;
    ef.T = [](double x) { return x; };
    ef.dT = [](double) { return 1.0; };
    ef.lip_T = 1.0;
    ef.M = [](double th) { return 0.5 * th * th; };
    ef.d2M = [](double) { return 1.0; };
    m.expfam = ef;
    m.sample_one = [](double th, Rng& rng) { return rng.normal(th, 1.0); };
    return m;
}

StatModel1D pareto_1d_model(double theta0) {
    StatModel1D m;
    m.name = "pareto_1d";
    m.data_dim = 1;
    m.log_likelihood = [](std::span<const double> x, double th) {
        if (!(th < x[0])) return -kInf;
        return std::log(th) - 2.0 * std::log(x[0]);
    };
    m.grad_x_log_likelihood = [](std::span<const double> x, double th) {
        (void)th;
        return std::vector<double>{-2.0 / x[0]};
    };
    m.support_hi = [](std::span<const double> x) { return x[0]; };
    m.data_domain = {1.0, kInf};
    m.data_space = {{1.05}, {2.5}};
    m.param_space = {1.0, theta0};
    m.sample_one = [](double th, Rng& rng) {
        double u = rng.uniform();
        while (u >= 1.0) u = rng.uniform();
        return th / (1.0 - u); // inverse CDF of theta/x^2 on (theta, inf)
    };
    return m;
}

StatModel1D pareto_msample_model(int mdim, double theta0) {
    if (mdim < 1) throw NumericError("pareto_msample: m must be >= 1");
    StatModel1D m;
    m.name = "pareto_msample";
    m.data_dim = mdim;
    const double log_norm = std::log(tgamma_int(mdim)); // simplex factor (m-1)!
    m.log_likelihood = [mdim, log_norm](std::span<const double> x, double th) {
        double s = 0.0;
        for (int i = 0; i < mdim; ++i) s += x[i];
        if (!(th < s)) return -kInf;
        return log_norm + std::log(th) - (mdim + 1.0) * std::log(s);
    };
    m.grad_x_log_likelihood = [mdim](std::span<const double> x, double th) {
        (void)th;
        double s = 0.0;
        for (int i = 0; i < mdim; ++i) s += x[i];
        return std::vector<double>(mdim, -(mdim + 1.0) / s);
    };
    m.support_hi = [mdim](std::span<const double> x) {
        double s = 0.0;
        for (int i = 0; i < mdim; ++i) s += x[i];
        return s;
    };
    m.data_domain = {0.0, kInf};
    m.data_space = {std::vector<double>(mdim, 0.5), std::vector<double>(mdim, 1.5)};
    m.param_space = {1.0, theta0};
    return m;
}

Prior gaussian_prior(double mean, double sd) {
    if (!(sd > 0.0)) throw NumericError("gaussian_prior: sd must be positive");
    Prior p;
    p.name = "gaussian";
    p.density = [mean, sd](double th) {
        double z = (th - mean) / sd;
        return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
    };
    p.support = {-kInf, kInf};
    p.W = [mean, sd](double th) {
        double z = (th - mean) / sd;
        return 0.5 * z * z;
    };
    p.lambda_star = 1.0 / (sd * sd);
    return p;
}

Prior uniform_prior(double lo, double hi) {
    if (!(lo < hi)) throw NumericError("uniform_prior: empty interval");
    Prior p;
    p.name = "uniform";
    p.density = [](double) { return 1.0; };
    p.support = {lo, hi};
    p.W = [](double) { return 0.0; };
    p.lambda_star = 0.0;
    return p;
}

Prior exponential_prior(double beta, double hi) {
    if (!(beta > 0.0)) throw NumericError("exponential_prior: beta must be positive");
    Prior p;
    p.name = "exponential";
    p.density = [beta](double th) { return beta * std::exp(-beta * th); };
    p.support = {0.0, hi};
    p.W = [beta](double th) { return beta * th; };
    p.lambda_star = 0.0;
    return p;
}

Prior custom_prior(std::function<double(double)> density, Interval support) {
    Prior p;
    p.name = "custom";
    p.density = std::move(density);
    p.support = support;
    return p;
}

DiscreteMeasure GridMeasure2D::to_discrete() const {
    DiscreteMeasure d;
    d.dim = 2;
    d.coords.reserve(2 * weights.size());
    d.weights.reserve(weights.size());
    for (std::size_t i = 0; i < theta_nodes.size(); ++i)
        for (std::size_t j = 0; j < eps_nodes.size(); ++j) {
            double w = weights[i * eps_nodes.size() + j];
            if (w <= 0.0) continue;
            d.coords.push_back(theta_nodes[i]);
            d.coords.push_back(eps_nodes[j]);
            d.weights.push_back(w);
        }
    return d;
}

StatModel2D pareto_2param_model() {
    StatModel2D m;
    m.name = "pareto_2param";
    m.log_likelihood = [](double x, double th, double eps) {
        if (!(th <= x)) return -kInf;
        return std::log(eps) + eps * std::log(th) - (1.0 + eps) * std::log(x);
    };
    m.param_box = {{1.0, 1.0}, {2.0, 2.0}};
    return m;
}

Prior2D uniform_prior_2d(Box support) {
    Prior2D p;
    p.density = [](double, double) { return 1.0; };
    p.support = std::move(support);
    return p;
}

GridMeasure2D posterior_2d_grid(const StatModel2D& model, const Prior2D& prior,
                                double x, int n_theta, int n_eps, bool mapped) {
    if (n_theta < 32 || n_eps < 32)
        throw NumericError("posterior_2d_grid: need at least 32 nodes per axis");
    const Box& b = prior.support;
    GridMeasure2D g;
    g.theta_nodes.resize(n_theta);
    g.eps_nodes.resize(n_eps);
    for (int i = 0; i < n_theta; ++i) {
        double ref = b.lo[0] + b.width(0) * i / (n_theta - 1.0);
        g.theta_nodes[i] = mapped ? (ref - 1.0) * (x - 1.0) + 1.0 : ref;
    }
    for (int j = 0; j < n_eps; ++j)
        g.eps_nodes[j] = b.lo[1] + b.width(1) * j / (n_eps - 1.0);

    // trapezoid tensor weights times the unnormalized posterior density
    g.weights.assign(static_cast<std::size_t>(n_theta) * n_eps, 0.0);
    double shift = -kInf;
    std::vector<double> lp(g.weights.size(), -kInf);
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_eps; ++j) {
            double th = g.theta_nodes[i], ep = g.eps_nodes[j];
            double q = prior.density(th, ep);
            if (!(q > 0.0)) continue;
            bool inside = mapped ? true : th < x;
            if (!inside) continue;
            double v = model.log_likelihood(x, th, ep) + std::log(q);
            lp[i * n_eps + j] = v;
            shift = std::max(shift, v);
        }
    if (!std::isfinite(shift))
        throw ZeroEvidence("posterior_2d_grid: posterior vanishes on the whole grid");
    double total = 0.0;
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_eps; ++j) {
            double v = lp[i * n_eps + j];
            if (!std::isfinite(v)) continue;
            double wt = (i == 0 || i == n_theta - 1 ? 0.5 : 1.0) *
                        (j == 0 || j == n_eps - 1 ? 0.5 : 1.0);
            double w = wt * std::exp(v - shift);
            g.weights[i * n_eps + j] = w;
            total += w;
        }
    if (!(total > 0.0)) throw ZeroEvidence("posterior_2d_grid: zero total weight");
    for (double& w : g.weights) w /= total;
    return g;
}

GaussianVec wiener_family(int j, double x) {
    if (j < 2 || j > 128) throw NumericError("wiener_family: j must lie in [2,128]");
    if (!(x >= 0.0 && x <= 1.0)) throw NumericError("wiener_family: x must lie in [0,1]");
    Eigen::MatrixXd sigma(j, j);
    for (int r = 0; r < j; ++r)
        for (int s = 0; s < j; ++s)
            sigma(r, s) = static_cast<double>(std::min(r, s) + 1) / j;
    const double sj = std::sqrt(static_cast<double>(j));
    int k = std::min(static_cast<int>(std::floor(j * x)), j - 1);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(j);
    // coordinate k multiplies the pinned B(0)=0 when k=0 and is dropped
    if (k >= 1) v[k - 1] = (k + 1 - j * x) / sj;
    v[k] = (j * x - k) / sj;
    return GaussianVec(sigma * v, sigma);
}

bool model_registry_has(const std::string& name) {
    return name == "gaussian_location" || name == "pareto_1d" ||
           name == "pareto_msample" || name == "pareto_2param" ||
           name == "expfam_custom" || name == "wiener_j";
}

StatModel1D make_model(const std::string& name, const ParamMap& params) {
    auto get = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (name == "gaussian_location") return gaussian_location_model();
    if (name == "pareto_1d") return pareto_1d_model(get("theta0", kInf));
    if (name == "pareto_msample")
        return pareto_msample_model(static_cast<int>(get("m", 1)), get("theta0", kInf));
    if (name == "expfam_custom") {
        // quadratic family: T(x) = c x, base density h = N(0, a/c^2), so
        // that M(theta) = log ∫ e^{T(x) theta} h(x) dx = a theta^2 / 2
        double c = get("lip_T", 1.0);
        double a = get("curvature", 1.0);
        if (!(c != 0.0) || !(a > 0.0))
            throw ConfigError("expfam_custom: needs lip_T != 0 and curvature > 0");
        double s2 = a / (c * c);
        StatModel1D m;
        m.name = "expfam_custom";
        m.data_dim = 1;
        m.log_likelihood = [c, a, s2](std::span<const double> x, double th) {
            return c * x[0] * th - 0.5 * a * th * th - 0.5 * x[0] * x[0] / s2 -
                   0.5 * std::log(2.0 * M_PI * s2);
        };
        m.grad_x_log_likelihood = [c, s2](std::span<const double> x, double th) {
            return std::vector<double>{c * th - x[0] / s2};
        };
        ExpFamilySpec ef;
        ef.T = [c](double x) { return c * x; };
        ef.dT = [c](double) { return c; };
        ef.lip_T = std::abs(c);
        ef.M = [a](double th) { return 0.5 * a * th * th; };
        ef.d2M = [a](double) { return a; };
        m.expfam = ef;
        m.sample_one = [c, a, s2](double th, Rng& rng) {
            return rng.normal(a * th / c, std::sqrt(s2));
        };
        m.data_domain = {-kInf, kInf};
        m.data_space = {{-3.0}, {3.0}};
        m.param_space = {-kInf, kInf};
        return m;
    }
    if (name == "pareto_2param" || name == "wiener_j")
        throw ConfigError("model '" + name + "' is not a scalar-parameter model; "
                          "use the dedicated command");
    throw ConfigError("unknown model '" + name + "'");
}

Prior make_prior(const std::string& name, const ParamMap& params) {
    auto get = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (name == "gaussian") return gaussian_prior(get("mean", 0.0), get("sd", 1.0));
    if (name == "uniform") return uniform_prior(get("lo", 0.0), get("hi", 1.0));
    if (name == "exponential") return exponential_prior(get("beta", 1.0), get("hi", kInf));
    throw ConfigError("unknown prior '" + name + "'");
}

} // namespace wellposed
