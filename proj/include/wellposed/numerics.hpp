#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "wellposed/errors.hpp"

namespace wellposed {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// An open interval, possibly unbounded on either side.
struct Interval {
    double lo = -kInf;
    double hi = kInf;

    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    double width() const { return hi - lo; }
    bool contains(double t) const { return t > lo && t < hi; }
};

/// Tolerances for adaptive quadrature. The defaults are used everywhere
/// a spec is not passed explicitly.
struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 200;
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over an interval.
///
/// Unbounded domains are first mapped onto a bounded one:
///   (-inf,inf):  theta = t/(1-t^2),      t in (-1,1)
///   (lo, inf):   theta = lo + t/(1-t),   t in (0,1)
///   (-inf, hi):  theta = hi - t/(1-t),   t in (0,1)
/// and the transformed integrand is subdivided adaptively.
///
/// Throws NonConvergent when max_subdivisions is exhausted and NonFinite
/// when f evaluates to NaN/inf at a quadrature node.
IntegralResult integrate_full(const std::function<double(double)>& f,
                              Interval domain,
                              const QuadratureSpec& spec = {});

inline double integrate(const std::function<double(double)>& f,
                        Interval domain,
                        const QuadratureSpec& spec = {}) {
    return integrate_full(f, domain, spec).value;
}

/// Central-difference gradient of f at x. Error O(step^2) for C^3
/// functions. The default step is 1e-5 * max(1,|x_i|) per coordinate.
std::vector<double> gradient_fd(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& x,
                                double step = 0.0);

/// Convenience scalar derivative.
double derivative_fd(const std::function<double(double)>& f, double x, double step = 0.0);

/// Spectral oracle for the order-2 Poincare constant of the measure
/// w(theta) dtheta on the given domain.
///
/// Discretizes the weighted Neumann problem -(w u')' = lambda w u with a
/// vertex-centered flux scheme (half-cell masses at the endpoints, so the
/// scheme is second order) and returns 1/sqrt(lambda_1), lambda_1 being
/// the first nonzero eigenvalue. Unbounded domains are truncated where
/// the weight falls below 1e-14 of its maximum.
///
/// This is the reference every closed-form bound in poincare.hpp is
/// tested against; it must stay independent of those formulas.
double poincare_constant_1d_numeric(const std::function<double(double)>& density,
                                    Interval domain,
                                    int grid_size = 2000);

namespace detail {

/// Map an arbitrary interval to a bounded parametrization.
/// Returns {t_lo, t_hi} and fills theta(t), dtheta/dt.
struct DomainMap {
    double t_lo, t_hi;
    std::function<double(double)> theta;
    std::function<double(double)> jacobian;
};
DomainMap map_domain(Interval domain);

/// Truncate an unbounded domain where `density` drops below
/// cutoff_ratio times its maximum (scan + refine).
Interval truncate_support(const std::function<double(double)>& density,
                          Interval domain, double cutoff_ratio = 1e-14);

} // namespace detail

} // namespace wellposed
