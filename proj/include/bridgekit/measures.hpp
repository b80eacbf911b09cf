#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bridgekit {

/// N(mean, variance) on the real line.
class GaussianMeasure {
public:
    GaussianMeasure(double mean, double variance);

    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return variance_; }
    double stddev() const;
    double pdf(double x) const;
    double log_pdf(double x) const;

    friend bool operator==(const GaussianMeasure&, const GaussianMeasure&) = default;

private:
    double mean_;
    double variance_;
};

/// Uniform grid lo = x_0 < x_1 < ... < x_{n-1} = hi.
class Grid {
public:
    Grid(double lo, double hi, std::size_t n);

    /// [min(a,b) - margin, max(a,b) + margin] with n points.
    static Grid around(double a, double b, double margin = 8.0, std::size_t n = 512);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }

    double operator[](std::size_t i) const noexcept { return lo_ + static_cast<double>(i) * h_; }
    std::vector<double> points() const;

    /// Composite trapezoid weight of node i.
    double weight(std::size_t i) const noexcept { return (i == 0 || i + 1 == n_) ? 0.5 * h_ : h_; }
    std::vector<double> weights() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double lo_;
    double hi_;
    std::size_t n_;
    double h_;
};

/// Composite trapezoid rule of sampled values on the grid.
double trapezoid(const Grid& grid, std::span<const double> values);

/// Derivative of sampled values. Central stencils in the interior, one-sided
/// stencils of the same order at the ends. order is 2 or 4.
std::vector<double> central_gradient(const Grid& grid, std::span<const double> values, int order = 4);

/// Real-valued samples on a grid; every value finite.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values);
    static GridFunction constant(const Grid& grid, double c);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::size_t size() const noexcept { return values_.size(); }
    double sup_norm() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Probability density with respect to Lebesgue measure, sampled on a grid.
class GridDensity {
public:
    static constexpr double mass_tolerance = 1e-6;

    /// Throws MassDeficitError unless the trapezoid mass is within mass_tolerance of 1.
    GridDensity(Grid grid, std::vector<double> values);

    /// Divides by the trapezoid mass when it is within max_drift of 1, throws otherwise.
    static GridDensity renormalized(Grid grid, std::vector<double> values, double max_drift);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::size_t size() const noexcept { return values_.size(); }
    double mass() const;

    /// Sample mean and variance by trapezoid quadrature.
    double mean() const;
    double variance() const;

private:
    struct Unchecked {};
    GridDensity(Grid grid, std::vector<double> values, Unchecked);

    Grid grid_;
    std::vector<double> values_;
};

enum class ReferenceKind { lebesgue, standard_gaussian, tabulated };

/// Reversing measure m sampled as a density w.r.t. Lebesgue.
class ReferenceMeasure {
public:
    static ReferenceMeasure lebesgue(const Grid& grid);
    /// Throws MassDeficitError if the grid does not hold the Gaussian mass to 1e-6.
    static ReferenceMeasure standard_gaussian(const Grid& grid);
    /// Arbitrary nonnegative Lebesgue density; zero weights are allowed.
    static ReferenceMeasure tabulated(const Grid& grid, std::vector<double> weights);

    ReferenceKind kind() const noexcept { return kind_; }
    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::span<const double> log_weights() const noexcept { return log_weights_; }

private:
    ReferenceMeasure(ReferenceKind kind, Grid grid, std::vector<double> log_weights);

    ReferenceKind kind_;
    Grid grid_;
    std::vector<double> weights_;
    std::vector<double> log_weights_;
};

/// Samples the N(m, v) density; the grid must span mean +- 8 standard deviations.
GridDensity gaussian_grid_density(const GaussianMeasure& g, const Grid& grid);

/// H(p|r) = int p log(p/r) with 0 log 0 = 0. Negative values are legitimate for r = Lebesgue.
double relative_entropy(const GridDensity& p, const ReferenceMeasure& r);

/// Squared W2 between two Gaussians on the line.
double wasserstein2_gaussian(const GaussianMeasure& g0, const GaussianMeasure& g1);

/// Displacement interpolation between equal-variance Gaussians.
GaussianMeasure mccann_interpolation(const GaussianMeasure& g0, const GaussianMeasure& g1, double t);

}  // namespace bridgekit
