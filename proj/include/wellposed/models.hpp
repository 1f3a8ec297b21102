#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wellposed/measures.hpp"
#include "wellposed/rng.hpp"
#include "wellposed/transport.hpp"

namespace wellposed {

/// Axis-aligned box, used for declared data regions.
struct Box {
    std::vector<double> lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
    double width(int k) const { return hi[k] - lo[k]; }
};

/// Canonical exponential-family data: Phi(x,theta) = T(x) theta - M(theta).
struct ExpFamilySpec {
    std::function<double(double)> T;
    std::function<double(double)> dT;
    double lip_T = 1.0;
    std::function<double(double)> M;
    std::function<double(double)> d2M; // Hess of M
};

/// A dominated statistical model with scalar parameter. Observations are
/// points of R^m (one "observation" may itself be an m-sample, as in the
/// summed Pareto model).
struct StatModel1D {
    std::string name;
    int data_dim = 1;
    std::function<double(std::span<const double>, double)> log_likelihood;
    /// d/dx_i log f(x|theta); empty -> finite differences
    std::function<std::vector<double>(std::span<const double>, double)> grad_x_log_likelihood;
    /// posterior support cuts induced by likelihood truncation
    std::function<double(std::span<const double>)> support_hi; // empty -> +inf
    std::function<double(std::span<const double>)> support_lo; // empty -> -inf
    Interval data_domain{-kInf, kInf}; // full 1d data range (for validation)
    Box data_space;                    // declared compact box for sup-over-x
    Interval param_space{-kInf, kInf};
    std::optional<ExpFamilySpec> expfam;
    /// draw one scalar observation from f(.|theta) (contraction runs)
    std::function<double(double, Rng&)> sample_one;

    double loglik(std::span<const double> x, double theta) const {
        return log_likelihood(x, theta);
    }
};

/// Prior with a possibly unnormalized density; when the density has the
/// form e^{-W}, the potential and its curvature floor may be attached.
struct Prior {
    std::string name;
    std::function<double(double)> density;
    Interval support{-kInf, kInf};
    std::function<double(double)> W;              // optional potential
    std::optional<double> lambda_star;            // min eigenvalue of Hess W
};

/// x -> pi(.|x) built from a model and a prior through the Bayes formula.
/// Likelihoods are combined in log space and exponentiated after
/// subtracting the running maximum, so n-fold products do not underflow.
class PosteriorKernel {
public:
    PosteriorKernel(StatModel1D model, Prior prior);

    /// Posterior given a single observation (vector of size data_dim).
    Distribution1D posterior(std::span<const double> x) const;
    Distribution1D posterior(double x) const { return posterior(std::span(&x, 1)); }

    /// Posterior under the n-fold product likelihood of scalar data.
    Distribution1D posterior_n(std::span<const double> xs) const;

    /// log rho(x); throws ZeroEvidence below the absolute floor 1e-300.
    double log_evidence(std::span<const double> x) const;
    double log_evidence(double x) const { return log_evidence(std::span(&x, 1)); }

    /// Support of pi(.|x) after likelihood truncation.
    Interval support_at(std::span<const double> x) const;

    const StatModel1D& model() const { return model_; }
    const Prior& prior() const { return prior_; }

private:
    Distribution1D from_logpost(const std::function<double(double)>& logpost,
                                Interval supp) const;

    StatModel1D model_;
    Prior prior_;
    double log_prior_mass_;
};

/// Checks that x -> f(x|theta) integrates to one over the model's full
/// 1d data domain, on a grid of theta values. Called at registration.
void validate_model(const StatModel1D& model, int theta_grid = 9, double tol = 1e-6);

// ---- builtin models -------------------------------------------------------

/// f(x|theta) = N(theta, 1); exponential family with T(x)=x, M = theta^2/2.
StatModel1D gaussian_location_model();

/// f(x|theta) = theta/x^2 1{theta < x} on X = (1,inf), Theta = (1,theta0).
StatModel1D pareto_1d_model(double theta0 = kInf);

/// m i.i.d.-like Pareto observations entering through the sum; the
/// likelihood is normalized with the simplex factor (m-1)!.
StatModel1D pareto_msample_model(int m, double theta0 = kInf);

// ---- builtin priors -------------------------------------------------------

Prior gaussian_prior(double mean, double sd);
Prior uniform_prior(double lo, double hi);
Prior exponential_prior(double beta, double hi = kInf); // on (0, hi)
Prior custom_prior(std::function<double(double)> density, Interval support);

// ---- two-parameter Pareto (2d posterior on a tensor grid) -----------------

struct StatModel2D {
    std::string name;
    // log f(x | theta, eps)
    std::function<double(double, double, double)> log_likelihood;
    Box param_box; // (theta, eps) box
};

struct Prior2D {
    std::function<double(double, double)> density;
    Box support;
};

/// Weighted tensor-grid measure in the plane.
struct GridMeasure2D {
    std::vector<double> theta_nodes, eps_nodes;
    std::vector<double> weights; // row-major over (theta, eps), sums to one
    DiscreteMeasure to_discrete() const;
};

StatModel2D pareto_2param_model();
Prior2D uniform_prior_2d(Box support);

/// Posterior of a 2d model on a tensor grid with trapezoid weights.
/// When `mapped` is set the reference grid on param_box is pulled through
/// (theta,eps) -> ((theta-1)(x-1)+1, eps), the diffeomorphism the
/// two-parameter Pareto domain (1,x)x(1,2) comes from; otherwise the grid
/// is laid on the parameter box directly and nodes with theta >= x get
/// weight zero.
GridMeasure2D posterior_2d_grid(const StatModel2D& model, const Prior2D& prior,
                                double x, int n_theta, int n_eps,
                                bool mapped = true);

// ---- the section-3.4 finite-dimensional Wiener family ---------------------

/// pi'_j(.|x) = N_j(u_j(x), Sigma_j) with Sigma_j[r,s] = min(r,s)/j in
/// 1-based indices. v_j(x) carries at most two nonzero entries,
/// (k+1-jx)/sqrt(j) at coordinate k and (jx-k)/sqrt(j) at coordinate k+1,
/// k = floor(jx); the k = 0 entry multiplies the pinned starting point
/// B(0) = 0 of the underlying Brownian path and is dropped. Requires
/// 2 <= j <= 128 and x in [0,1].
GaussianVec wiener_family(int j, double x);

// ---- registry --------------------------------------------------------

using ParamMap = std::map<std::string, double>;

/// Builds a builtin model by registry name: gaussian_location, pareto_1d,
/// pareto_msample, pareto_2param, expfam_custom, wiener_j.
bool model_registry_has(const std::string& name);
StatModel1D make_model(const std::string& name, const ParamMap& params);
Prior make_prior(const std::string& name, const ParamMap& params);

} // namespace wellposed
