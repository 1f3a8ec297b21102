#include "wellposed/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "wellposed/rng.hpp"

namespace wellposed {

namespace {

// 15-point Gauss-Kronrod values on a bounded cell (value, error).
// Same node set as the adaptive integrator; duplicated here to keep the
// cache build free of heap churn.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

std::pair<double, double> cell_gk(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    if (!std::isfinite(fc) || fc < 0.0) throw NonFinite("density not finite/nonnegative");
    double k15 = kWgk[7] * fc, g7 = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        double f1 = f(c - h * kXgk[i]);
        double f2 = f(c + h * kXgk[i]);
        if (!std::isfinite(f1) || !std::isfinite(f2) || f1 < 0.0 || f2 < 0.0)
            throw NonFinite("density not finite/nonnegative");
        k15 += kWgk[i] * (f1 + f2);
        if (i % 2 == 1) g7 += kWg[i / 2] * (f1 + f2);
    }
    return {k15 * h, std::abs(k15 - g7) * h};
}

} // namespace

Distribution1D::Distribution1D(std::function<double(double)> density, Interval support)
    : density_(std::move(density)), support_(support) {
    if (!(support_.lo < support_.hi))
        throw NumericError("Distribution1D: empty support interval");
    range_ = support_.bounded() ? support_
                                : detail::truncate_support(density_, support_);
    build_cache();
}

void Distribution1D::build_cache() {
    struct Cell {
        double a, b, mass, err;
    };
    const int kInit = 512;
    const int kMaxCells = 16384;
    std::vector<Cell> cells;
    cells.reserve(2048);
    for (int i = 0; i < kInit; ++i) {
        double a = range_.lo + range_.width() * i / kInit;
        double b = range_.lo + range_.width() * (i + 1) / kInit;
        auto [m, e] = cell_gk(density_, a, b);
        cells.push_back({a, b, m, e});
    }
    auto total_mass = [&] {
        double s = 0.0;
        for (const auto& c : cells) s += c.mass;
        return s;
    };

    // split cells until no one holds too much mass and the cumulative
    // quadrature error is negligible against the total
    bool changed = true;
    int rounds = 0;
    while (changed && static_cast<int>(cells.size()) < kMaxCells && rounds < 40) {
        changed = false;
        ++rounds;
        double total = total_mass();
        if (total <= 0.0) break;
        double err = 0.0;
        for (const auto& c : cells) err += c.err;
        std::vector<Cell> next;
        next.reserve(cells.size() + 64);
        for (const auto& c : cells) {
            bool heavy = c.mass > 0.02 * total;
            bool rough = err > 1e-12 * total && c.err > 2.0 * err / cells.size();
            if ((heavy || rough) && static_cast<int>(cells.size() + next.size()) < kMaxCells &&
                c.b - c.a > 1e-14 * (1.0 + std::abs(c.a))) {
                double mid = 0.5 * (c.a + c.b);
                auto [m1, e1] = cell_gk(density_, c.a, mid);
                auto [m2, e2] = cell_gk(density_, mid, c.b);
                next.push_back({c.a, mid, m1, e1});
                next.push_back({mid, c.b, m2, e2});
                changed = true;
            } else {
                next.push_back(c);
            }
        }
        cells.swap(next);
    }

    std::sort(cells.begin(), cells.end(),
              [](const Cell& x, const Cell& y) { return x.a < y.a; });
    edges_.resize(cells.size() + 1);
    cum_.resize(cells.size() + 1);
    edges_[0] = cells[0].a;
    cum_[0] = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        edges_[i + 1] = cells[i].b;
        cum_[i + 1] = cum_[i] + cells[i].mass;
    }
    normalizer_ = cum_.back();
    if (!(normalizer_ > 0.0) || !std::isfinite(normalizer_))
        throw Degenerate("Distribution1D: density mass is zero or not finite");
}

double Distribution1D::pdf(double theta) const {
    if (!support_.contains(theta)) return 0.0;
    double v = density_(theta);
    if (!std::isfinite(v) || v < 0.0) throw NonFinite("density not finite/nonnegative");
    return v / normalizer_;
}

double Distribution1D::cell_partial_mass(int cell, double theta) const {
    if (theta <= edges_[cell]) return 0.0;
    return cell_gk(density_, edges_[cell], theta).first;
}

double Distribution1D::cdf(double theta) const {
    if (theta <= edges_.front()) return 0.0;
    if (theta >= edges_.back()) return 1.0;
    auto it = std::upper_bound(edges_.begin(), edges_.end(), theta);
    int cell = static_cast<int>(it - edges_.begin()) - 1;
    double f = (cum_[cell] + cell_partial_mass(cell, theta)) / normalizer_;
    return std::clamp(f, 0.0, 1.0);
}

double Distribution1D::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0))
        throw NumericError("quantile: u must lie strictly inside (0,1)");
    const double target = u * normalizer_;
    auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
    int cell = std::clamp(static_cast<int>(it - cum_.begin()) - 1, 0,
                          static_cast<int>(cum_.size()) - 2);
    double lo = edges_[cell], hi = edges_[cell + 1];
    double rem = target - cum_[cell];
    double cell_mass = cum_[cell + 1] - cum_[cell];
    double th = cell_mass > 0.0 ? lo + (hi - lo) * std::clamp(rem / cell_mass, 0.0, 1.0)
                                : 0.5 * (lo + hi);
    // safeguarded Newton on F(theta) - target within the bracketing cell
    for (int iter = 0; iter < 60; ++iter) {
        double g = cell_partial_mass(cell, th) - rem;
        if (g > 0.0) hi = th;
        else lo = th;
        double d = density_(th);
        double step = d > 0.0 ? g / d : 0.0;
        double next = th - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(g) <= 1e-13 * normalizer_ &&
            hi - lo <= 1e-12 * (1.0 + std::abs(th))) {
            th = next;
            break;
        }
        th = next;
    }
    return th;
}

Moments Distribution1D::moments() const {
    QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    spec.abs_tol = 1e-14 * (1.0 + range_.width() * range_.width());
    spec.max_subdivisions = 400;
    double mean = integrate([&](double t) { return t * pdf(t); }, range_, spec);
    double var = integrate([&](double t) {
        double d = t - mean;
        return d * d * pdf(t);
    }, range_, spec);
    return {mean, std::max(var, 0.0)};
}

std::vector<double> Distribution1D::sample(int n, std::uint64_t seed) const {
    if (n < 1) throw NumericError("sample: n must be >= 1");
    Rng rng(seed);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        while (u <= 0.0 || u >= 1.0) u = rng.uniform();
        out[i] = quantile(u);
    }
    return out;
}

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> locations, std::vector<double> weights) {
    if (locations.size() != weights.size() || locations.empty())
        throw NumericError("EmpiricalMeasure: bad atom lists");
    double s = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw NumericError("EmpiricalMeasure: weights must be positive");
        s += w;
    }
    atoms_.reserve(locations.size());
    for (std::size_t i = 0; i < locations.size(); ++i)
        atoms_.emplace_back(locations[i], weights[i] / s);
    std::sort(atoms_.begin(), atoms_.end());
}

EmpiricalMeasure EmpiricalMeasure::from_samples(std::vector<double> samples) {
    std::vector<double> w(samples.size(), 1.0);
    return EmpiricalMeasure(std::move(samples), std::move(w));
}

double EmpiricalMeasure::quantile(double u) const {
    if (!(u > 0.0 && u <= 1.0))
        throw NumericError("EmpiricalMeasure::quantile: u outside (0,1]");
    double acc = 0.0;
    for (const auto& [loc, w] : atoms_) {
        acc += w;
        if (acc >= u - 1e-15) return loc;
    }
    return atoms_.back().first;
}

GaussianVec::GaussianVec(Eigen::VectorXd m, Eigen::MatrixXd cov)
    : mean(std::move(m)), covariance(std::move(cov)) {
    if (covariance.rows() != covariance.cols() || covariance.rows() != mean.size())
        throw NumericError("GaussianVec: dimension mismatch");
    double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw NumericError("GaussianVec: covariance not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalFailure("GaussianVec: eigensolve failed");
    if (es.eigenvalues().minCoeff() < -1e-12 * scale)
        throw NumericError("GaussianVec: covariance has a negative eigenvalue");
}

} // namespace wellposed
