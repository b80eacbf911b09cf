#pragma once

#include <cstddef>
#include <vector>

#include "bridgekit/measures.hpp"
#include "bridgekit/semigroup.hpp"

namespace bridgekit {

struct SolverOptions {
    double tol = 1e-9;
    std::size_t max_iterations = 100000;
    /// Kernel time of the coupling; 1 is the usual problem, other values give the horizon-u cost.
    double horizon = 1.0;
    /// When false a non-converged solution is returned with converged == false instead of throwing.
    bool throw_on_failure = true;
};

/// Potentials of the Schroedinger system, stored as logarithms.
///
/// marginal_error is the sup-norm distance between the reconstructed marginals
/// m f0 T g1, m g1 T f0 and the targets, measured as Lebesgue densities.
struct SchroedingerSolution {
    KolmogorovModel model;
    Grid grid;
    double horizon;
    GridDensity mu0;
    GridDensity mu1;
    std::vector<double> log_f0;
    std::vector<double> log_g1;
    double cost_unscaled = 0.0;
    double cost_scaled = 0.0;
    std::size_t iterations = 0;
    double marginal_error = 0.0;
    bool converged = false;
    std::vector<double> error_history;

    /// (c f0, g1 / c): the same coupling under another gauge.
    SchroedingerSolution regauged(double log_c) const;
};

/// Log-domain iterative proportional fitting started from g = 1.
/// Throws ConvergenceError when max_iterations is exhausted (unless disabled in options)
/// and DivisionGuardError when a marginal vanishes inside its own support.
SchroedingerSolution solve_schrodinger_system(const KolmogorovModel& model, const GridDensity& mu0,
                                              const GridDensity& mu1, const SolverOptions& options = {});

/// Same, reusing a kernel built at the horizon.
SchroedingerSolution solve_schrodinger_system(const KernelMatrix& kernel, const GridDensity& mu0,
                                              const GridDensity& mu1, const SolverOptions& options = {});

struct EntropicCost {
    double unscaled;
    double scaled;
};

/// int log f0 dmu0 + int log g1 dmu1, and eps times that.
EntropicCost entropic_cost(const SchroedingerSolution& sol, const GridDensity& mu0, const GridDensity& mu1);

/// Interpolation potentials phi_t = log T_t f0 and psi_t = log T_{H-t} g1 (H = horizon).
struct InterpolationPotentials {
    std::vector<double> phi;
    std::vector<double> psi;
};
InterpolationPotentials interpolation_potentials(const SchroedingerSolution& sol, double t);

/// mu_t = T_t f0 T_{H-t} g1 m as a Lebesgue density. Mass drift above 1e-4 throws DiscretizationError.
GridDensity entropic_interpolation(const SchroedingerSolution& sol, double t);

constexpr double interpolation_max_drift = 1e-4;

}  // namespace bridgekit
