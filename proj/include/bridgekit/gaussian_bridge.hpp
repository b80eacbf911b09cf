#pragma once

#include "bridgekit/measures.hpp"
#include "bridgekit/semigroup.hpp"

namespace bridgekit {

/// Heat bridge between N(x0, 1) and N(x1, 1):
/// mean (1-t)x0 + t x1, variance 1 + alpha t(1-t).
struct HeatBridgeParams {
    double epsilon;
    double x0;
    double x1;
    double delta;  // (eps - 2 + sqrt(4 + eps^2)) / 2
    double alpha;  // delta^2 / (1 + delta)
    double gamma;  // 2 (x0 (1 + delta) - x1)

    static HeatBridgeParams make(double epsilon, double x0, double x1);
};

/// Constants of the published Ornstein-Uhlenbeck formulas.
struct OuBridgeParams {
    double epsilon;
    double x0;
    double x1;
    double delta;
    double gamma;

    static OuBridgeParams make(double epsilon, double x0, double x1);
};

/// Which OU bridge to evaluate.
///
/// exact: the bridge obtained by solving the Schroedinger system with Gaussian
/// potentials. Unit-variance endpoints stay unit variance, and the mean is
/// A e^{-eps t/2} + B e^{-eps(1-t)/2}.
///
/// published: the a_t-based formulas of the reference text. They reproduce the
/// endpoints but disagree with the Sinkhorn solution in between (variance 1.35
/// instead of 1 at t = 1/2 for eps = 1); kept for figure reproduction.
enum class OuFormula { exact, published };

/// How mean_rate / variance_rate are obtained.
enum class RateMethod { analytic, central_difference };

struct BridgeOptions {
    OuFormula ou_formula = OuFormula::exact;
    RateMethod rate_method = RateMethod::analytic;
    double fd_step = 1e-5;
};

struct BridgeMoment {
    double t;
    double mean;
    double variance;
    double mean_rate;
    double variance_rate;
};

BridgeMoment bridge_moments(const KolmogorovModel& model, double x0, double x1, double t,
                            const BridgeOptions& options = {});

/// N(mean, variance) sampled on the grid; throws MassDeficitError for a narrow grid.
GridDensity bridge_density(const BridgeMoment& mom, const Grid& grid);

/// psi_t(x) = quadratic x^2 + linear x, additive constant fixed to 0.
struct QuadraticPotential {
    double quadratic;
    double linear;
    double operator()(double x) const noexcept { return (quadratic * x + linear) * x; }
    double gradient(double x) const noexcept { return 2.0 * quadratic * x + linear; }
};

/// Optimal dual potential of the eps-scaled problem at time t, so that the
/// forward drift is its gradient.
QuadraticPotential dual_potential_coefficients(const KolmogorovModel& model, double x0, double x1, double t,
                                               const BridgeOptions& options = {});
GridFunction dual_potential(const KolmogorovModel& model, double x0, double x1, double t, const Grid& grid,
                            const BridgeOptions& options = {});

/// Eulerian current velocity v(z) = variance_rate / (2 variance) (z - mean) + mean_rate.
double current_velocity_at(const BridgeMoment& mom, double z) noexcept;
GridFunction current_velocity(const BridgeMoment& mom, const Grid& grid);

/// The velocity as printed for the OU case, with the Lagrangian label (z - x0) in place of (z - mean).
double current_velocity_literal_ou(const BridgeMoment& mom, double z, double x0) noexcept;

/// x -> sqrt(variance) (x - x0) + mean, and its time derivative.
double pushforward_map(const BridgeMoment& mom, double x, double x0) noexcept;
double pushforward_rate(const BridgeMoment& mom, double x, double x0) noexcept;

}  // namespace bridgekit
