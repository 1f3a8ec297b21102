#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wellposed/numerics.hpp"

namespace wellposed {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// A one-dimensional probability measure given by a (possibly
/// unnormalized) density on an interval. Construction runs a cumulative
/// quadrature pass and caches a strictly increasing CDF grid; cdf /
/// quantile / sampling all work off that cache. Immutable afterwards.
class Distribution1D {
public:
    /// `density` must be nonnegative and integrable on `support`.
    /// Unnormalized densities are accepted; the mass ends up in
    /// normalizer(). Throws Degenerate when no mass is found.
    Distribution1D(std::function<double(double)> density, Interval support);

    double pdf(double theta) const;        // normalized density
    double unnormalized(double theta) const { return density_(theta); }
    double cdf(double theta) const;
    double quantile(double u) const;       // u in (0,1)
    double median() const { return quantile(0.5); }
    Moments moments() const;               // mean and variance by quadrature
    std::vector<double> sample(int n, std::uint64_t seed) const;

    const Interval& support() const { return support_; }
    /// Total mass of the raw density (the Bayes numerator mass).
    double normalizer() const { return normalizer_; }
    /// Effective bounded interval carrying the cached mass.
    const Interval& cached_range() const { return range_; }

private:
    void build_cache();
    double cell_partial_mass(int cell, double theta) const;

    std::function<double(double)> density_;
    Interval support_;
    Interval range_;              // truncated/bounded version of support_
    std::vector<double> edges_;   // cell edges, increasing
    std::vector<double> cum_;     // cumulative raw mass at edges_, increasing
    double normalizer_ = 0.0;
};

/// Sorted atoms with positive weights summing to one.
class EmpiricalMeasure {
public:
    EmpiricalMeasure(std::vector<double> locations, std::vector<double> weights);
    /// Equal weights 1/n.
    static EmpiricalMeasure from_samples(std::vector<double> samples);

    std::size_t size() const { return atoms_.size(); }
    double location(std::size_t i) const { return atoms_[i].first; }
    double weight(std::size_t i) const { return atoms_[i].second; }
    /// Left-continuous generalized inverse of the CDF.
    double quantile(double u) const;

private:
    std::vector<std::pair<double, double>> atoms_; // (location, weight), sorted
};

/// A Gaussian on R^d. Covariance must be symmetric PSD (checked within
/// 1e-12 tolerance at construction).
struct GaussianVec {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;

    GaussianVec(Eigen::VectorXd m, Eigen::MatrixXd cov);
    int dim() const { return static_cast<int>(mean.size()); }
};

} // namespace wellposed
