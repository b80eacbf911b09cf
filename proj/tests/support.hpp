#pragma once

// Shared fixtures and hand-rolled generators for the unit tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "bridgekit/measures.hpp"
#include "bridgekit/semigroup.hpp"

namespace bridgekit::testing {

inline Grid default_grid() { return Grid::around(-3.0, 3.0); }

inline GridDensity unit_gaussian(double mean, const Grid& grid) {
    return gaussian_grid_density(GaussianMeasure(mean, 1.0), grid);
}

inline KolmogorovModel model_of(Potential p, double eps) {
    return p == Potential::zero ? KolmogorovModel::heat(eps) : KolmogorovModel::ornstein_uhlenbeck(eps);
}

/// Random bounded function: a few trigonometric modes plus a capped bump.
class BoundedFunctionGen {
public:
    explicit BoundedFunctionGen(std::uint64_t seed) : rng_(seed) {}

    GridFunction operator()(const Grid& grid) {
        std::uniform_real_distribution<double> amp(-1.0, 1.0), freq(0.1, 2.0), phase(0.0, 6.283185307179586),
            centre(-4.0, 4.0);
        const double a1 = amp(rng_), a2 = amp(rng_), c = amp(rng_);
        const double k1 = freq(rng_), k2 = freq(rng_), p1 = phase(rng_), p2 = phase(rng_);
        const double xc = centre(rng_), cap = 1.0 + std::abs(amp(rng_));
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = grid[i];
            v[i] = c + a1 * std::sin(k1 * x + p1) + a2 * std::cos(k2 * x + p2) +
                   std::min(cap, 0.1 * (x - xc) * (x - xc));
        }
        return GridFunction(grid, std::move(v));
    }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

private:
    std::mt19937_64 rng_;
};

/// sup |a - b| over the rows flagged true.
inline double sup_diff(std::span<const double> a, std::span<const double> b, const std::vector<bool>& rows) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (rows[i]) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

inline double sup_diff(std::span<const double> a, std::span<const double> b) {
    return sup_diff(a, b, std::vector<bool>(a.size(), true));
}

}  // namespace bridgekit::testing
