#include "bridgekit/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bridgekit/error.hpp"

namespace bridgekit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// A zero sample strictly between two positive ones would make the update 0/0 there.
void guard_support(const GridDensity& mu, const char* which) {
    const auto v = mu.values();
    const auto first = std::find_if(v.begin(), v.end(), [](double x) { return x > 0.0; });
    const auto last = std::find_if(v.rbegin(), v.rend(), [](double x) { return x > 0.0; }).base();
    for (auto it = first; it != last; ++it) {
        if (*it == 0.0) {
            std::ostringstream os;
            os << "solve_schrodinger_system: " << which << " vanishes at index " << (it - v.begin())
               << " inside its support";
            throw DivisionGuardError(os.str());
        }
    }
}

std::vector<double> log_density_vs_reference(const GridDensity& mu, std::span<const double> log_m) {
    std::vector<double> out(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) out[i] = mu[i] > 0.0 ? std::log(mu[i]) - log_m[i] : kNegInf;
    return out;
}

// log rho - log T h, refusing to divide by a vanishing T h where rho > 0.
void divide(std::span<const double> log_rho, std::span<const double> log_th, std::vector<double>& out) {
    for (std::size_t i = 0; i < log_rho.size(); ++i) {
        if (log_rho[i] == kNegInf) {
            out[i] = kNegInf;
            continue;
        }
        if (!std::isfinite(log_th[i])) {
            throw DivisionGuardError("solve_schrodinger_system: kernel image vanishes where the marginal is positive");
        }
        out[i] = log_rho[i] - log_th[i];
    }
}

double marginal_gap(std::span<const double> log_m, std::span<const double> log_a, std::span<const double> log_tb,
                    const GridDensity& mu) {
    double err = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double rec = std::exp(log_m[i] + log_a[i] + log_tb[i]);
        err = std::max(err, std::abs(rec - mu[i]));
    }
    return err;
}

double weighted_log_sum(const GridDensity& mu, std::span<const double> log_pot) {
    const Grid& grid = mu.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu[i] == 0.0) continue;
        s += grid.weight(i) * mu[i] * log_pot[i];
    }
    return s;
}

void require_converged(const SchroedingerSolution& sol, const char* who) {
    if (!sol.converged) {
        throw ConvergenceError(std::string(who) + ": solution did not converge", sol.marginal_error, sol.iterations);
    }
}

}  // namespace

SchroedingerSolution SchroedingerSolution::regauged(double log_c) const {
    SchroedingerSolution out = *this;
    for (double& v : out.log_f0) v += log_c;
    for (double& v : out.log_g1) v -= log_c;
    return out;
}

SchroedingerSolution solve_schrodinger_system(const KolmogorovModel& model, const GridDensity& mu0,
                                              const GridDensity& mu1, const SolverOptions& options) {
    if (!(options.horizon > 0.0) || !std::isfinite(options.horizon)) {
        throw InputError("solve_schrodinger_system: horizon must be positive");
    }
    return solve_schrodinger_system(build_kernel(model, options.horizon, mu0.grid()), mu0, mu1, options);
}

SchroedingerSolution solve_schrodinger_system(const KernelMatrix& kernel, const GridDensity& mu0,
                                              const GridDensity& mu1, const SolverOptions& options) {
    const Grid& grid = kernel.grid();
    if (!(mu0.grid() == grid) || !(mu1.grid() == grid)) {
        throw InputError("solve_schrodinger_system: marginals and kernel must share one grid");
    }
    if (kernel.is_identity()) {
        throw InputError("solve_schrodinger_system: horizon must be positive");
    }
    if (!(options.tol > 0.0) || options.max_iterations == 0) {
        throw InputError("solve_schrodinger_system: tol must be positive and max_iterations nonzero");
    }
    guard_support(mu0, "mu0");
    guard_support(mu1, "mu1");

    const KolmogorovModel& model = kernel.model();
    const ReferenceMeasure m = model.reference(grid);
    const auto log_m = m.log_weights();
    const auto log_rho0 = log_density_vs_reference(mu0, log_m);
    const auto log_rho1 = log_density_vs_reference(mu1, log_m);

    const std::size_t n = grid.size();
    std::vector<double> log_f(n);
    std::vector<double> log_g(n, 0.0);
    std::vector<double> log_tg = log_apply_semigroup(kernel, log_g);
    std::vector<double> log_tf;

    SchroedingerSolution sol{model, grid, kernel.time(), mu0, mu1, {}, {}, 0.0, 0.0, 0, 0.0, false, {}};
    double err = std::numeric_limits<double>::infinity();
    std::size_t it = 0;
    while (it < options.max_iterations) {
        ++it;
        divide(log_rho0, log_tg, log_f);
        log_tf = log_apply_semigroup(kernel, log_f);
        divide(log_rho1, log_tf, log_g);
        log_tg = log_apply_semigroup(kernel, log_g);
        err = std::max(marginal_gap(log_m, log_f, log_tg, mu0), marginal_gap(log_m, log_g, log_tf, mu1));
        sol.error_history.push_back(err);
        if (err <= options.tol) break;
    }

    sol.log_f0 = std::move(log_f);
    sol.log_g1 = std::move(log_g);
    sol.iterations = it;
    sol.marginal_error = err;
    sol.converged = err <= options.tol;
    sol.cost_unscaled = weighted_log_sum(mu0, sol.log_f0) + weighted_log_sum(mu1, sol.log_g1);
    sol.cost_scaled = model.epsilon() * sol.cost_unscaled;
    if (!sol.converged && options.throw_on_failure) {
        std::ostringstream os;
        os << "solve_schrodinger_system: marginal error " << err << " after " << it << " iterations (tol "
           << options.tol << ")";
        throw ConvergenceError(os.str(), err, it);
    }
    return sol;
}

EntropicCost entropic_cost(const SchroedingerSolution& sol, const GridDensity& mu0, const GridDensity& mu1) {
    require_converged(sol, "entropic_cost");
    if (!(mu0.grid() == sol.grid) || !(mu1.grid() == sol.grid)) {
        throw InputError("entropic_cost: marginals live on another grid");
    }
    const double unscaled = weighted_log_sum(mu0, sol.log_f0) + weighted_log_sum(mu1, sol.log_g1);
    return {unscaled, sol.model.epsilon() * unscaled};
}

InterpolationPotentials interpolation_potentials(const SchroedingerSolution& sol, double t) {
    if (!(t >= 0.0 && t <= sol.horizon)) {
        throw InputError("interpolation time must lie in [0, horizon]");
    }
    // Snap round-off next to the endpoints onto them; such kernels are point masses on any grid.
    constexpr double snap = 1e-12;
    const double t0 = t < snap ? 0.0 : t;
    const double t1 = sol.horizon - t < snap ? 0.0 : sol.horizon - t;
    InterpolationPotentials p;
    p.phi = log_apply_semigroup(build_kernel(sol.model, t0, sol.grid), sol.log_f0);
    p.psi = log_apply_semigroup(build_kernel(sol.model, t1, sol.grid), sol.log_g1);
    return p;
}

GridDensity entropic_interpolation(const SchroedingerSolution& sol, double t) {
    require_converged(sol, "entropic_interpolation");
    const auto p = interpolation_potentials(sol, t);
    const ReferenceMeasure ref = sol.model.reference(sol.grid);
    const auto log_m = ref.log_weights();
    std::vector<double> rho(sol.grid.size());
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::exp(p.phi[i] + p.psi[i] + log_m[i]);
    return GridDensity::renormalized(sol.grid, std::move(rho), interpolation_max_drift);
}

}  // namespace bridgekit
