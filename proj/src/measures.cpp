#include "bridgekit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bridgekit/error.hpp"

namespace bridgekit {

namespace {

constexpr double kSpanSigmas = 8.0;

std::string describe_mass(double mass) {
    std::ostringstream os;
    os.precision(12);
    os << mass;
    return os.str();
}

}  // namespace

// --- GaussianMeasure --------------------------------------------------------

GaussianMeasure::GaussianMeasure(double mean, double variance) : mean_(mean), variance_(variance) {
    if (!std::isfinite(mean) || !std::isfinite(variance) || variance <= 0.0) {
        throw InputError("GaussianMeasure needs a finite mean and a positive finite variance");
    }
}

double GaussianMeasure::stddev() const { return std::sqrt(variance_); }

double GaussianMeasure::log_pdf(double x) const {
    const double d = x - mean_;
    return -0.5 * d * d / variance_ - 0.5 * std::log(2.0 * std::numbers::pi * variance_);
}

double GaussianMeasure::pdf(double x) const { return std::exp(log_pdf(x)); }

// --- Grid -------------------------------------------------------------------

Grid::Grid(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n), h_(0.0) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw InputError("Grid needs finite bounds with lo < hi");
    }
    if (n < 3) {
        throw InputError("Grid needs at least 3 points");
    }
    h_ = (hi - lo) / static_cast<double>(n - 1);
}

Grid Grid::around(double a, double b, double margin, std::size_t n) {
    return Grid(std::min(a, b) - margin, std::max(a, b) + margin, n);
}

std::vector<double> Grid::points() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = (*this)[i];
    return x;
}

std::vector<double> Grid::weights() const {
    std::vector<double> w(n_);
    for (std::size_t i = 0; i < n_; ++i) w[i] = weight(i);
    return w;
}

double trapezoid(const Grid& grid, std::span<const double> values) {
    if (values.size() != grid.size()) {
        throw InputError("trapezoid: sample count does not match the grid");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += grid.weight(i) * values[i];
    return sum;
}

std::vector<double> central_gradient(const Grid& grid, std::span<const double> f, int order) {
    const std::size_t n = f.size();
    if (n != grid.size()) {
        throw InputError("central_gradient: sample count does not match the grid");
    }
    const double h = grid.spacing();
    std::vector<double> g(n);
    if (order == 2) {
        for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        g[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        g[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
        return g;
    }
    if (order != 4) {
        throw InputError("central_gradient: order must be 2 or 4");
    }
    if (n < 5) {
        throw InputError("central_gradient: fourth order needs at least 5 samples");
    }
    const double c = 12.0 * h;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        g[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / c;
    }
    g[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / c;
    g[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / c;
    g[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / c;
    g[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / c;
    return g;
}

// --- GridFunction -----------------------------------------------------------

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw InputError("GridFunction: sample count does not match the grid");
    }
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
        throw InputError("GridFunction: non-finite sample");
    }
}

GridFunction GridFunction::constant(const Grid& grid, double c) {
    return GridFunction(grid, std::vector<double>(grid.size(), c));
}

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

// --- GridDensity ------------------------------------------------------------

GridDensity::GridDensity(Grid grid, std::vector<double> values, Unchecked)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw InputError("GridDensity: sample count does not match the grid");
    }
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InputError("GridDensity: samples must be finite and nonnegative");
        }
    }
}

GridDensity::GridDensity(Grid grid, std::vector<double> values)
    : GridDensity(grid, std::move(values), Unchecked{}) {
    const double m = mass();
    if (std::abs(m - 1.0) > mass_tolerance) {
        throw MassDeficitError("GridDensity: trapezoid mass " + describe_mass(m) + " is not within 1e-6 of 1", m);
    }
}

GridDensity GridDensity::renormalized(Grid grid, std::vector<double> values, double max_drift) {
    GridDensity raw(grid, std::move(values), Unchecked{});
    const double m = raw.mass();
    if (!(std::abs(m - 1.0) <= max_drift)) {
        throw DiscretizationError("density mass " + describe_mass(m) + " drifted beyond the allowed " +
                                  describe_mass(max_drift));
    }
    for (double& v : raw.values_) v /= m;
    return raw;
}

double GridDensity::mass() const { return trapezoid(grid_, values_); }

double GridDensity::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) s += grid_.weight(i) * values_[i] * grid_[i];
    return s / mass();
}

double GridDensity::variance() const {
    const double mu = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double d = grid_[i] - mu;
        s += grid_.weight(i) * values_[i] * d * d;
    }
    return s / mass();
}

// --- ReferenceMeasure -------------------------------------------------------

ReferenceMeasure::ReferenceMeasure(ReferenceKind kind, Grid grid, std::vector<double> log_weights)
    : kind_(kind), grid_(grid), log_weights_(std::move(log_weights)) {
    weights_.resize(log_weights_.size());
    std::transform(log_weights_.begin(), log_weights_.end(), weights_.begin(),
                   [](double lw) { return std::exp(lw); });
}

ReferenceMeasure ReferenceMeasure::lebesgue(const Grid& grid) {
    return ReferenceMeasure(ReferenceKind::lebesgue, grid, std::vector<double>(grid.size(), 0.0));
}

ReferenceMeasure ReferenceMeasure::standard_gaussian(const Grid& grid) {
    const GaussianMeasure std_normal(0.0, 1.0);
    std::vector<double> lw(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) lw[i] = std_normal.log_pdf(grid[i]);
    ReferenceMeasure m(ReferenceKind::standard_gaussian, grid, std::move(lw));
    const double mass = trapezoid(grid, m.weights());
    if (std::abs(mass - 1.0) > GridDensity::mass_tolerance) {
        throw MassDeficitError("standard Gaussian reference captures mass " + describe_mass(mass) +
                                   " on the grid",
                               mass);
    }
    return m;
}

ReferenceMeasure ReferenceMeasure::tabulated(const Grid& grid, std::vector<double> weights) {
    if (weights.size() != grid.size()) {
        throw InputError("ReferenceMeasure: weight count does not match the grid");
    }
    std::vector<double> lw(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
            throw InputError("ReferenceMeasure: weights must be finite and nonnegative");
        }
        lw[i] = std::log(weights[i]);
    }
    return ReferenceMeasure(ReferenceKind::tabulated, grid, std::move(lw));
}

// --- operations -------------------------------------------------------------

GridDensity gaussian_grid_density(const GaussianMeasure& g, const Grid& grid) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = g.pdf(grid[i]);

    const double reach = kSpanSigmas * g.stddev();
    // Relative slack absorbs rounding in lo/hi for grids built as mean +- 8 sigma.
    const double slack = 1e-12 * std::max({1.0, std::abs(grid.lo()), std::abs(grid.hi())});
    if (grid.lo() > g.mean() - reach + slack || grid.hi() < g.mean() + reach - slack) {
        const double captured = trapezoid(grid, values);
        throw MassDeficitError("grid does not span mean +- 8 sd; captured mass " + describe_mass(captured), captured);
    }
    return GridDensity(grid, std::move(values));
}

double relative_entropy(const GridDensity& p, const ReferenceMeasure& r) {
    if (!(p.grid() == r.grid())) {
        throw InputError("relative_entropy: density and reference live on different grids");
    }
    const Grid& grid = p.grid();
    const auto lrw = r.log_weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double pi = p[i];
        if (pi == 0.0) continue;
        if (!std::isfinite(lrw[i])) {
            throw AbsoluteContinuityError("relative_entropy: p > 0 where the reference vanishes");
        }
        sum += grid.weight(i) * pi * (std::log(pi) - lrw[i]);
    }
    return sum;
}

double wasserstein2_gaussian(const GaussianMeasure& g0, const GaussianMeasure& g1) {
    const double dm = g0.mean() - g1.mean();
    const double ds = g0.stddev() - g1.stddev();
    return dm * dm + ds * ds;
}

GaussianMeasure mccann_interpolation(const GaussianMeasure& g0, const GaussianMeasure& g1, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw InputError("mccann_interpolation: t must lie in [0, 1]");
    }
    const double scale = std::max(g0.variance(), g1.variance());
    if (std::abs(g0.variance() - g1.variance()) > 1e-12 * scale) {
        throw UnsupportedCaseError("mccann_interpolation: only equal-variance Gaussians are supported");
    }
    return GaussianMeasure((1.0 - t) * g0.mean() + t * g1.mean(), g0.variance());
}

}  // namespace bridgekit
