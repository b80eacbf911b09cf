#include "bridgekit/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bridgekit/error.hpp"

namespace bridgekit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Generator (Laplacian - V' d/dx)/2 at time t is the model kernel at t / eps.
KernelMatrix outer_kernel(const KolmogorovModel& model, double t, const Grid& grid) {
    return build_kernel(model, t / model.epsilon(), grid);
}

double max_excess(const GridFunction& lhs, const GridFunction& rhs, const std::vector<bool>& valid, double shift) {
    double worst = kNegInf;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        if (valid[i]) worst = std::max(worst, lhs[i] - rhs[i] - shift);
    }
    if (worst == kNegInf) {
        throw TruncationError("commutation check: no grid point is computed exactly; widen the grid", 0, 0.0);
    }
    return worst;
}

std::vector<bool> both(const std::vector<bool>& a, const std::vector<bool>& b) {
    std::vector<bool> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
    return out;
}

void require_heat(const KolmogorovModel& model, const char* who) {
    if (model.potential() != Potential::zero) {
        throw ModelMismatchError(std::string(who) + ": the dimensional bound needs V = 0");
    }
}

void require_times(double t, double s) {
    if (!(t >= 0.0) || !(s >= 0.0) || !std::isfinite(t) || !std::isfinite(s)) {
        throw InputError("times must be nonnegative and finite");
    }
}

double dimensional_constant(double t, double s) {
    const double d = std::sqrt(t) - std::sqrt(s);
    return 0.5 * d * d;
}

}  // namespace

ContractionSchedule contraction_schedule(double lambda, double epsilon, double t, double b) {
    if (!std::isfinite(lambda) || !(epsilon > 0.0) || !std::isfinite(epsilon) || !(t >= 0.0) || !std::isfinite(t) ||
        !(b > 0.0) || !std::isfinite(b)) {
        throw InputError("contraction_schedule: need finite lambda, eps > 0, t >= 0, b > 0");
    }
    ContractionSchedule s{lambda, epsilon, t, b, t, b};
    if (lambda == 0.0) return s;

    if (lambda > 0.0 && t > 0.0) {
        s.b_max = -std::log(-std::expm1(-lambda * t)) / (lambda * epsilon);
    }
    const double decay = std::expm1(-epsilon * lambda * b);  // e^{-eps lambda b} - 1
    const double arg = 1.0 + std::exp(lambda * t) * decay;
    if (!(b < s.b_max) || !(arg > 0.0)) {
        std::ostringstream os;
        os << "contraction_schedule: b = " << b << " is outside (0, " << s.b_max << ")";
        throw DomainError(os.str(), s.b_max);
    }
    const double log_arg = std::log1p(std::exp(lambda * t) * decay);
    s.v = -log_arg / (lambda * epsilon);
    s.u = t + (-epsilon * lambda * b - log_arg) / lambda;
    return s;
}

GridDensity evolve_density(const KolmogorovModel& model, const GridDensity& mu, double t) {
    if (!(t >= 0.0)) throw InputError("evolve_density: t must be nonnegative");
    const Grid& grid = mu.grid();
    const auto m = model.reference(grid);
    std::vector<double> ratio(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) ratio[i] = mu[i] / m.weights()[i];
    const GridFunction tf = apply_semigroup(outer_kernel(model, t, grid), GridFunction(grid, std::move(ratio)));
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = tf[i] * m.weights()[i];
    return GridDensity::renormalized(grid, std::move(out), interpolation_max_drift);
}

double check_commutation(const KolmogorovModel& model, const GridFunction& f, double t, double b) {
    const auto sched = contraction_schedule(model.lambda(), model.epsilon(), t, b);
    const Grid& grid = f.grid();
    const std::vector<bool> all(grid.size(), true);

    const auto kt = outer_kernel(model, sched.t, grid);
    const auto kv = build_kernel(model, sched.v, grid);
    const auto lhs = entropic_hopf_lax(kv, apply_semigroup(kt, f));
    const auto lhs_valid = propagate_validity(kv, propagate_validity(kt, all));

    const auto kb = build_kernel(model, sched.b, grid);
    const auto ku = outer_kernel(model, sched.u, grid);
    const auto rhs = apply_semigroup(ku, entropic_hopf_lax(kb, f));
    const auto rhs_valid = propagate_validity(ku, propagate_validity(kb, all));

    return max_excess(lhs, rhs, both(lhs_valid, rhs_valid), 0.0);
}

double check_commutation_dimensional(const KolmogorovModel& model, const GridFunction& f, double t, double s) {
    require_heat(model, "check_commutation_dimensional");
    require_times(t, s);
    const Grid& grid = f.grid();
    const std::vector<bool> all(grid.size(), true);
    const auto k1 = build_kernel(model, 1.0, grid);

    const auto kt = outer_kernel(model, t, grid);
    const auto lhs = entropic_hopf_lax(k1, apply_semigroup(kt, f));
    const auto lhs_valid = propagate_validity(k1, propagate_validity(kt, all));

    const auto ks = outer_kernel(model, s, grid);
    const auto rhs = apply_semigroup(ks, entropic_hopf_lax(k1, f));
    const auto rhs_valid = propagate_validity(ks, propagate_validity(k1, all));

    return max_excess(lhs, rhs, both(lhs_valid, rhs_valid), dimensional_constant(t, s));
}

ContractionCheck check_entropic_contraction(const KolmogorovModel& model, const GridDensity& mu_f,
                                            const GridDensity& mu_g, double t, double b,
                                            const SolverOptions& options) {
    const auto sched = contraction_schedule(model.lambda(), model.epsilon(), t, b);
    const auto ref = model.reference(mu_f.grid());
    const auto f_u = evolve_density(model, mu_f, sched.u);
    const auto g_t = evolve_density(model, mu_g, sched.t);

    SolverOptions at_b = options;
    at_b.horizon = sched.b;
    SolverOptions at_v = options;
    at_v.horizon = sched.v;

    const double lhs = solve_schrodinger_system(model, f_u, g_t, at_b).cost_scaled;
    const double rhs = solve_schrodinger_system(model, mu_f, mu_g, at_v).cost_scaled +
                       model.epsilon() * (relative_entropy(f_u, ref) - relative_entropy(mu_f, ref));
    return {lhs, rhs, rhs - lhs};
}

ContractionCheck check_entropic_contraction_dimensional(const KolmogorovModel& model, const GridDensity& mu_f,
                                                        const GridDensity& mu_g, double t, double s,
                                                        const SolverOptions& options) {
    require_heat(model, "check_entropic_contraction_dimensional");
    require_times(t, s);
    const auto ref = model.reference(mu_f.grid());
    const auto f_t = evolve_density(model, mu_f, t);
    const auto g_s = evolve_density(model, mu_g, s);

    SolverOptions unit = options;
    unit.horizon = 1.0;
    const double lhs = solve_schrodinger_system(model, f_t, g_s, unit).cost_scaled;
    const double rhs = solve_schrodinger_system(model, mu_f, mu_g, unit).cost_scaled + dimensional_constant(t, s) +
                       model.epsilon() * (relative_entropy(f_t, ref) - relative_entropy(mu_f, ref));
    return {lhs, rhs, rhs - lhs};
}

GaussianMeasure evolve_gaussian(const KolmogorovModel& model, const GaussianMeasure& g, double t) {
    if (!(t >= 0.0)) throw InputError("evolve_gaussian: t must be nonnegative");
    if (model.potential() == Potential::zero) {
        return GaussianMeasure(g.mean(), g.variance() + model.epsilon() * t);
    }
    const double decay = std::exp(-model.epsilon() * t);
    return GaussianMeasure(g.mean() * std::exp(-0.5 * model.epsilon() * t), g.variance() * decay + (1.0 - decay));
}

ContractionCheck check_wasserstein_contraction(const KolmogorovModel& model, const GaussianMeasure& g0,
                                               const GaussianMeasure& g1, double t) {
    const double lhs = std::sqrt(wasserstein2_gaussian(evolve_gaussian(model, g0, t), evolve_gaussian(model, g1, t)));
    const double rate = std::exp(-0.5 * model.lambda() * model.epsilon() * t);
    const double rhs = rate * std::sqrt(wasserstein2_gaussian(g0, g1));
    return {lhs, rhs, rhs - lhs};
}

ContractionCheck check_wasserstein_dimensional(const KolmogorovModel& model, const GaussianMeasure& g0,
                                               const GaussianMeasure& g1, double t, double s) {
    require_heat(model, "check_wasserstein_dimensional");
    require_times(t, s);
    const double lhs = wasserstein2_gaussian(evolve_gaussian(model, g0, t), evolve_gaussian(model, g1, s));
    const double d = std::sqrt(model.epsilon() * t) - std::sqrt(model.epsilon() * s);
    const double rhs = wasserstein2_gaussian(g0, g1) + d * d;
    return {lhs, rhs, rhs - lhs};
}

}  // namespace bridgekit
