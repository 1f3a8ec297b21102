#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wellposed/measures.hpp"
#include "wellposed/net_simplex.hpp"

namespace wellposed {

/// Atoms in R^d with positive weights summing to one.
struct DiscreteMeasure {
    int dim = 1;
    std::vector<double> coords;  // row-major, size() == dim * weights.size()
    std::vector<double> weights;

    static DiscreteMeasure points_1d(std::vector<double> locations,
                                     std::vector<double> weights);
    static DiscreteMeasure from_empirical(const EmpiricalMeasure& e);
    std::size_t size() const { return weights.size(); }
    const double* point(std::size_t k) const { return coords.data() + dim * k; }
};

struct TransportPlanResult {
    double cost = 0.0;                  // the metric value W_p
    std::vector<detail::PlanEntry> plan;
    std::string solver_tag;             // exact_lp | sinkhorn | quantile |
                                        // gaussian_closed_form | tv_density
    double declared_tolerance = 0.0;    // for the entropic solver
};

struct OtMode {
    enum Kind { Exact, Entropic } kind = Exact;
    double epsilon = 1e-3;    // final regularization (entropic only)
    int max_iterations = 20000;
    static OtMode exact() { return {Exact, 0.0, 0}; }
    static OtMode entropic(double eps) { return {Entropic, eps, 20000}; }
};

/// Total variation distance (1/2) ∫ |p_mu - p_nu| over the union of the
/// supports.
double tv_distance(const Distribution1D& mu, const Distribution1D& nu);

/// One-dimensional Wasserstein-p through quantile functions:
/// ( ∫_0^1 |F_mu^{-1}(u) - F_nu^{-1}(u)|^p du )^{1/p}.
///
/// Continuous curves are integrated on a fixed 4096-node Gauss-Legendre
/// rule with endpoint clipping u in (1e-9, 1-1e-9); a pair of empirical
/// measures is summed exactly over the merged weight breakpoints.
double wasserstein_1d(const Distribution1D& mu, const Distribution1D& nu, double p);
double wasserstein_1d(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double p);
double wasserstein_1d(const Distribution1D& mu, const EmpiricalMeasure& nu, double p);
double wasserstein_1d(const EmpiricalMeasure& mu, const Distribution1D& nu, double p);

/// Discrete optimal transport with Euclidean cost |x-y|^p. Exact mode
/// solves the LP with the network simplex; entropic mode runs debiased
/// log-domain Sinkhorn with an epsilon schedule 1.0 -> mode.epsilon.
TransportPlanResult ot_discrete(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                double p, OtMode mode = OtMode::exact(),
                                bool want_plan = false);

/// W2 between Gaussians: (|m_a-m_b|^2 + tr(Sa + Sb - 2(Sb^{1/2} Sa Sb^{1/2})^{1/2}))^{1/2}.
double gaussian_w2(const GaussianVec& a, const GaussianVec& b);

} // namespace wellposed
