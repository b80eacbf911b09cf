#include "bridgekit/gaussian_bridge.hpp"

#include <cmath>

#include "bridgekit/error.hpp"

namespace bridgekit {

namespace {

void require_unit_time(double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw InputError("bridge time must lie in [0, 1]");
    }
}

struct Pair {
    double mean;
    double variance;
};

Pair heat_pair(const HeatBridgeParams& p, double t) {
    return {(1.0 - t) * p.x0 + t * p.x1, 1.0 + p.alpha * t * (1.0 - t)};
}

// Exact OU bridge between unit-variance Gaussians: variance stays 1.
Pair ou_exact_pair(double eps, double x0, double x1, double t) {
    const double rho = std::exp(-0.5 * eps);
    const double den = 1.0 - rho * rho;
    const double a = (x0 - rho * x1) / den;
    const double b = (x1 - rho * x0) / den;
    return {a * std::exp(-0.5 * eps * t) + b * std::exp(-0.5 * eps * (1.0 - t)), 1.0};
}

double ou_exact_mean_rate(double eps, double x0, double x1, double t) {
    const double rho = std::exp(-0.5 * eps);
    const double den = 1.0 - rho * rho;
    const double a = (x0 - rho * x1) / den;
    const double b = (x1 - rho * x0) / den;
    return 0.5 * eps * (b * std::exp(-0.5 * eps * (1.0 - t)) - a * std::exp(-0.5 * eps * t));
}

struct PublishedOu {
    double a;
    double a_rate;
    double l;
    double l_rate;
};

PublishedOu ou_published_terms(const OuBridgeParams& p, double t) {
    const double eps = p.epsilon;
    const double d = p.delta;
    const double em = std::exp(-eps);
    const double num = 1.0 + d - d * em;
    const double s = d * (1.0 + d) * (std::exp(-eps * t) + std::exp(-eps * (1.0 - t))) - 2.0 * d * d * em;
    const double s_rate = d * (1.0 + d) * eps * (std::exp(-eps * (1.0 - t)) - std::exp(-eps * t));
    const double one_minus = -std::expm1(-eps);

    const double c0 = std::exp(-0.5 * eps * t) - std::exp(-eps * (1.0 - 0.5 * t));
    const double c1 = std::exp(-0.5 * eps * (1.0 - t)) - std::exp(-0.5 * eps * (1.0 + t));
    const double c0_rate = -0.5 * eps * std::exp(-0.5 * eps * t) - 0.5 * eps * std::exp(-eps * (1.0 - 0.5 * t));
    const double c1_rate = 0.5 * eps * std::exp(-0.5 * eps * (1.0 - t)) + 0.5 * eps * std::exp(-0.5 * eps * (1.0 + t));

    PublishedOu out;
    out.a = num / (one_minus * s);
    out.a_rate = -num * s_rate / (one_minus * s * s);
    out.l = c0 * p.x0 + c1 * p.x1;
    out.l_rate = c0_rate * p.x0 + c1_rate * p.x1;
    return out;
}

Pair ou_published_pair(const OuBridgeParams& p, double t) {
    const auto q = ou_published_terms(p, t);
    return {q.a * q.l, -1.0 + 2.0 * -std::expm1(-p.epsilon) * q.a};
}

Pair evaluate_pair(const KolmogorovModel& model, double x0, double x1, double t, OuFormula formula) {
    const double eps = model.epsilon();
    if (model.potential() == Potential::zero) return heat_pair(HeatBridgeParams::make(eps, x0, x1), t);
    if (formula == OuFormula::exact) return ou_exact_pair(eps, x0, x1, t);
    return ou_published_pair(OuBridgeParams::make(eps, x0, x1), t);
}

}  // namespace

HeatBridgeParams HeatBridgeParams::make(double epsilon, double x0, double x1) {
    if (!std::isfinite(epsilon) || epsilon <= 0.0 || !std::isfinite(x0) || !std::isfinite(x1)) {
        throw InputError("HeatBridgeParams: need eps > 0 and finite endpoints");
    }
    const double delta = 0.5 * (epsilon - 2.0 + std::sqrt(4.0 + epsilon * epsilon));
    return {epsilon, x0, x1, delta, delta * delta / (1.0 + delta), 2.0 * (x0 * (1.0 + delta) - x1)};
}

OuBridgeParams OuBridgeParams::make(double epsilon, double x0, double x1) {
    if (!std::isfinite(epsilon) || epsilon <= 0.0 || !std::isfinite(x0) || !std::isfinite(x1)) {
        throw InputError("OuBridgeParams: need eps > 0 and finite endpoints");
    }
    const double em = std::exp(-epsilon);
    const double delta = (em - std::sqrt(em * em - em + 1.0)) / (em - 1.0);
    const double gamma = (x0 * std::exp(-0.5 * epsilon) - x1 * (1.0 + delta - delta * em)) / (1.0 - em);
    return {epsilon, x0, x1, delta, gamma};
}

BridgeMoment bridge_moments(const KolmogorovModel& model, double x0, double x1, double t,
                            const BridgeOptions& options) {
    require_unit_time(t);
    const Pair at = evaluate_pair(model, x0, x1, t, options.ou_formula);
    BridgeMoment mom{t, at.mean, at.variance, 0.0, 0.0};

    if (options.rate_method == RateMethod::central_difference) {
        // The formulas are analytic in t, so the stencil may step past [0, 1].
        const double h = options.fd_step;
        const Pair up = evaluate_pair(model, x0, x1, t + h, options.ou_formula);
        const Pair dn = evaluate_pair(model, x0, x1, t - h, options.ou_formula);
        mom.mean_rate = (up.mean - dn.mean) / (2.0 * h);
        mom.variance_rate = (up.variance - dn.variance) / (2.0 * h);
    } else if (model.potential() == Potential::zero) {
        const auto p = HeatBridgeParams::make(model.epsilon(), x0, x1);
        mom.mean_rate = x1 - x0;
        mom.variance_rate = p.alpha * (1.0 - 2.0 * t);
    } else if (options.ou_formula == OuFormula::exact) {
        mom.mean_rate = ou_exact_mean_rate(model.epsilon(), x0, x1, t);
        mom.variance_rate = 0.0;
    } else {
        const auto q = ou_published_terms(OuBridgeParams::make(model.epsilon(), x0, x1), t);
        mom.mean_rate = q.a_rate * q.l + q.a * q.l_rate;
        mom.variance_rate = 2.0 * -std::expm1(-model.epsilon()) * q.a_rate;
    }
    if (!(mom.variance > 0.0)) {
        throw InputError("bridge_moments: variance is not positive");
    }
    return mom;
}

GridDensity bridge_density(const BridgeMoment& mom, const Grid& grid) {
    return gaussian_grid_density(GaussianMeasure(mom.mean, mom.variance), grid);
}

QuadraticPotential dual_potential_coefficients(const KolmogorovModel& model, double x0, double x1, double t,
                                               const BridgeOptions& options) {
    require_unit_time(t);
    const double eps = model.epsilon();
    if (model.potential() == Potential::zero) {
        const auto p = HeatBridgeParams::make(eps, x0, x1);
        const double den = 1.0 + p.delta * (1.0 - t);
        return {-0.5 * p.delta / den, -0.5 * p.gamma / den};
    }
    if (options.ou_formula == OuFormula::exact) {
        const double rho = std::exp(-0.5 * eps);
        const double b = (x1 - rho * x0) / (1.0 - rho * rho);
        return {0.0, eps * b * std::exp(-0.5 * eps * (1.0 - t))};
    }
    const auto p = OuBridgeParams::make(eps, x0, x1);
    const double decay = std::exp(-eps * (1.0 - t));
    const double den = 1.0 + p.delta * (1.0 - decay);
    return {-0.5 * eps * p.delta * decay / den, eps * p.gamma * std::exp(-0.5 * eps * (1.0 - t)) / den};
}

GridFunction dual_potential(const KolmogorovModel& model, double x0, double x1, double t, const Grid& grid,
                            const BridgeOptions& options) {
    const auto q = dual_potential_coefficients(model, x0, x1, t, options);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = q(grid[i]);
    return GridFunction(grid, std::move(v));
}

double current_velocity_at(const BridgeMoment& mom, double z) noexcept {
    return mom.variance_rate / (2.0 * mom.variance) * (z - mom.mean) + mom.mean_rate;
}

GridFunction current_velocity(const BridgeMoment& mom, const Grid& grid) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = current_velocity_at(mom, grid[i]);
    return GridFunction(grid, std::move(v));
}

double current_velocity_literal_ou(const BridgeMoment& mom, double z, double x0) noexcept {
    return mom.variance_rate / (2.0 * mom.variance) * (z - x0) + mom.mean_rate;
}

double pushforward_map(const BridgeMoment& mom, double x, double x0) noexcept {
    return std::sqrt(mom.variance) * (x - x0) + mom.mean;
}

double pushforward_rate(const BridgeMoment& mom, double x, double x0) noexcept {
    return mom.variance_rate / (2.0 * std::sqrt(mom.variance)) * (x - x0) + mom.mean_rate;
}

}  // namespace bridgekit
