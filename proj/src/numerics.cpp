#include "wellposed/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <Eigen/Dense>

namespace wellposed {

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1,1] (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Segment {
    double a, b;
    double value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    if (!std::isfinite(fc)) throw NonFinite("integrand not finite at quadrature node");
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    double fv[15];
    fv[14] = fc;
    for (int i = 0; i < 7; ++i) {
        double f1 = f(c - h * kXgk[i]);
        double f2 = f(c + h * kXgk[i]);
        if (!std::isfinite(f1) || !std::isfinite(f2))
            throw NonFinite("integrand not finite at quadrature node");
        fv[2 * i] = f1;
        fv[2 * i + 1] = f2;
        k15 += kWgk[i] * (f1 + f2);
        if (i % 2 == 1) g7 += kWg[i / 2] * (f1 + f2);
    }
    k15 *= h;
    g7 *= h;
    // QUADPACK-style error rescaling against the L1 deviation from the mean
    double mean = k15 / (b - a);
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk[i] * (std::abs(fv[2 * i] - mean) + std::abs(fv[2 * i + 1] - mean));
    resasc *= std::abs(h);
    double err = std::abs(k15 - g7);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    return {a, b, k15, err};
}

} // namespace

namespace detail {

DomainMap map_domain(Interval domain) {
    DomainMap m;
    if (domain.bounded()) {
        m.t_lo = domain.lo;
        m.t_hi = domain.hi;
        m.theta = [](double t) { return t; };
        m.jacobian = [](double) { return 1.0; };
    } else if (!std::isfinite(domain.lo) && !std::isfinite(domain.hi)) {
        m.t_lo = -1.0;
        m.t_hi = 1.0;
        m.theta = [](double t) { return t / (1.0 - t * t); };
        m.jacobian = [](double t) {
            double d = 1.0 - t * t;
            return (1.0 + t * t) / (d * d);
        };
    } else if (std::isfinite(domain.lo)) { // (lo, inf)
        double lo = domain.lo;
        m.t_lo = 0.0;
        m.t_hi = 1.0;
        m.theta = [lo](double t) { return lo + t / (1.0 - t); };
        m.jacobian = [](double t) {
            double d = 1.0 - t;
            return 1.0 / (d * d);
        };
    } else { // (-inf, hi), parametrized so that theta is increasing in t
        double hi = domain.hi;
        m.t_lo = 0.0;
        m.t_hi = 1.0;
        m.theta = [hi](double t) { return hi - (1.0 - t) / t; };
        m.jacobian = [](double t) { return 1.0 / (t * t); };
    }
    return m;
}

Interval truncate_support(const std::function<double(double)>& density,
                          Interval domain, double cutoff_ratio) {
    if (domain.bounded()) return domain;
    DomainMap m = map_domain(domain);
    const int n = 4097;
    std::vector<double> ts(n), ws(n);
    double wmax = 0.0;
    const double dt = (m.t_hi - m.t_lo) / n;
    for (int i = 0; i < n; ++i) {
        // cell midpoints, strictly inside the open parameter range
        double t = m.t_lo + dt * (i + 0.5);
        ts[i] = t;
        double w = density(m.theta(t));
        ws[i] = std::isfinite(w) ? w : 0.0;
        wmax = std::max(wmax, ws[i]);
    }
    if (wmax <= 0.0) throw Degenerate("weight vanishes on the whole scan grid");
    const double cut = cutoff_ratio * wmax;
    int first = 0, last = n - 1;
    while (first < n && ws[first] < cut) ++first;
    while (last >= 0 && ws[last] < cut) --last;
    if (first >= last) throw Degenerate("weight above cutoff on fewer than two scan nodes");
    double lo = std::isfinite(domain.lo) ? domain.lo : m.theta(ts[std::max(0, first - 1)]);
    double hi = std::isfinite(domain.hi) ? domain.hi : m.theta(ts[std::min(n - 1, last + 1)]);
    return {lo, hi};
}

} // namespace detail

IntegralResult integrate_full(const std::function<double(double)>& f,
                              Interval domain, const QuadratureSpec& spec) {
    if (!(domain.lo < domain.hi)) throw NumericError("integrate: empty interval");
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 1)
        throw NumericError("integrate: invalid QuadratureSpec");

    detail::DomainMap m = detail::map_domain(domain);
    auto g = [&](double t) {
        double j = m.jacobian(t);
        return f(m.theta(t)) * std::abs(j);
    };

    std::priority_queue<Segment> segs;
    double total = 0.0, total_err = 0.0;
    const int n0 = domain.bounded() ? 1 : 8; // pre-split mapped infinite ranges
    for (int i = 0; i < n0; ++i) {
        double a = m.t_lo + (m.t_hi - m.t_lo) * i / n0;
        double b = m.t_lo + (m.t_hi - m.t_lo) * (i + 1) / n0;
        Segment s = gk15(g, a, b);
        total += s.value;
        total_err += s.error;
        segs.push(s);
    }

    int splits = 0;
    while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (splits >= spec.max_subdivisions)
            throw NonConvergent("integrate: subdivision limit reached, error estimate " +
                                std::to_string(total_err));
        Segment worst = segs.top();
        segs.pop();
        total -= worst.value;
        total_err -= worst.error;
        double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            throw NonConvergent("integrate: interval too small to subdivide");
        for (Segment s : {gk15(g, worst.a, mid), gk15(g, mid, worst.b)}) {
            total += s.value;
            total_err += s.error;
            segs.push(s);
        }
        ++splits;
    }
    return {total, total_err, splits};
}

std::vector<double> gradient_fd(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& x, double step) {
    std::vector<double> grad(x.size());
    std::vector<double> xp = x, xm = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double h = step > 0.0 ? step : 1e-5 * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        double fp = f(xp), fm = f(xm);
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw NonFinite("gradient_fd: function not finite near x");
        grad[i] = (fp - fm) / (2.0 * h);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return grad;
}

double derivative_fd(const std::function<double(double)>& f, double x, double step) {
    auto wrap = [&](const std::vector<double>& v) { return f(v[0]); };
    return gradient_fd(wrap, {x}, step)[0];
}

double poincare_constant_1d_numeric(const std::function<double(double)>& density,
                                    Interval domain, int grid_size) {
    if (grid_size < 16) throw NumericError("poincare oracle: grid_size must be >= 16");
    Interval dom = detail::truncate_support(density, domain);

    const int n = grid_size;
    const double h = dom.width() / (n - 1);
    std::vector<double> node_w(n), mid_w(n - 1);
    int underflow = 0;
    for (int i = 0; i < n; ++i) {
        double th = dom.lo + h * i;
        double w = density(th);
        if (!std::isfinite(w) || w < 0.0) throw NonFinite("poincare oracle: bad weight value");
        if (w < 1e-300) ++underflow;
        node_w[i] = w;
    }
    if (2 * underflow > n)
        throw Degenerate("poincare oracle: weight underflows on more than half the grid");
    for (int i = 0; i + 1 < n; ++i) {
        double th = dom.lo + h * (i + 0.5);
        double w = density(th);
        if (!std::isfinite(w) || w < 0.0) throw NonFinite("poincare oracle: bad weight value");
        mid_w[i] = std::max(w, 1e-300);
    }
    // lumped masses: half cells at the two boundary vertices
    std::vector<double> mass(n);
    for (int i = 0; i < n; ++i) {
        double m = node_w[i];
        mass[i] = std::max(m, 1e-300) * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
    }

    // B = M^{-1/2} A M^{-1/2} stays symmetric tridiagonal
    Eigen::VectorXd diag(n), sub(n - 1);
    for (int i = 0; i < n; ++i) {
        double a = (i == 0 ? mid_w[0] : i == n - 1 ? mid_w[n - 2] : mid_w[i - 1] + mid_w[i]);
        diag[i] = a / (h * h) / mass[i];
    }
    for (int i = 0; i + 1 < n; ++i)
        sub[i] = -mid_w[i] / (h * h) / std::sqrt(mass[i] * mass[i + 1]);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalFailure("poincare oracle: tridiagonal eigensolve failed");
    double lambda1 = es.eigenvalues()[1];
    if (!(lambda1 > 0.0))
        throw Degenerate("poincare oracle: first nonzero eigenvalue not positive");
    return 1.0 / std::sqrt(lambda1);
}

} // namespace wellposed
