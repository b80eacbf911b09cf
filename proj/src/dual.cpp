#include "bridgekit/dual.hpp"

#include <cmath>

#include "bridgekit/error.hpp"

namespace bridgekit {

double dual_functional(const KernelMatrix& kernel_1, const GridDensity& mu0, const GridDensity& mu1,
                       const GridFunction& psi) {
    const Grid& grid = kernel_1.grid();
    if (!(mu0.grid() == grid) || !(mu1.grid() == grid) || !(psi.grid() == grid)) {
        throw InputError("dual_functional: inputs live on different grids");
    }
    const KolmogorovModel& model = kernel_1.model();
    const double h0 = relative_entropy(mu0, model.reference(grid));
    const GridFunction q = entropic_hopf_lax(kernel_1, psi);
    double pay = 0.0;
    double charge = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        pay += grid.weight(i) * psi[i] * mu1[i];
        charge += grid.weight(i) * q[i] * mu0[i];
    }
    return model.epsilon() * h0 + pay - charge;
}

double dual_functional(const KolmogorovModel& model, const GridDensity& mu0, const GridDensity& mu1,
                       const GridFunction& psi) {
    return dual_functional(build_kernel(model, 1.0, mu0.grid()), mu0, mu1, psi);
}

GridFunction optimal_dual_potential(const SchroedingerSolution& sol) {
    if (!sol.converged) {
        throw ConvergenceError("optimal_dual_potential: solution did not converge", sol.marginal_error,
                               sol.iterations);
    }
    std::vector<double> v(sol.log_g1.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = sol.model.epsilon() * sol.log_g1[i];
    return GridFunction(sol.grid, std::move(v));
}

DualReport dual_gap(const KolmogorovModel& model, const GridDensity& mu0, const GridDensity& mu1,
                    const SchroedingerSolution& sol, const std::vector<GridFunction>& candidates) {
    if (!(sol.model == model)) {
        throw InputError("dual_gap: solution was computed for another model");
    }
    if (std::abs(sol.horizon - 1.0) > 1e-12) {
        throw InputError("dual_gap: the dual functional is stated for the unit horizon");
    }
    const KernelMatrix k = build_kernel(model, 1.0, mu0.grid());
    const double primal = entropic_cost(sol, mu0, mu1).scaled;

    DualReport r{primal, dual_functional(k, mu0, mu1, optimal_dual_potential(sol)), 0.0, candidates.size()};
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const double v = dual_functional(k, mu0, mu1, candidates[c]);
        if (v > r.dual_value) {
            r.dual_value = v;
            r.best = c;
        }
    }
    r.gap = primal - r.dual_value;
    return r;
}

}  // namespace bridgekit
