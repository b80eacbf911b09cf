#pragma once

#include <cstddef>
#include <vector>

#include "bridgekit/measures.hpp"
#include "bridgekit/semigroup.hpp"
#include "bridgekit/sinkhorn.hpp"

namespace bridgekit {

/// eps H(mu0|m) + int psi dmu1 - int Q^eps_1 psi dmu0, all eps-scaled.
double dual_functional(const KolmogorovModel& model, const GridDensity& mu0, const GridDensity& mu1,
                       const GridFunction& psi);

/// Same with the unit-horizon kernel already built.
double dual_functional(const KernelMatrix& kernel_1, const GridDensity& mu0, const GridDensity& mu1,
                       const GridFunction& psi);

/// eps log g1 of a converged solution: the maximizer of the dual functional.
GridFunction optimal_dual_potential(const SchroedingerSolution& sol);

struct DualReport {
    double primal;      // eps times the entropic cost
    double dual_value;  // best candidate value
    double gap;         // primal - dual_value
    std::size_t best;   // index of the best candidate; candidates.size() means the solver's potential
};

/// Evaluates every candidate plus eps log g1 and keeps the best.
DualReport dual_gap(const KolmogorovModel& model, const GridDensity& mu0, const GridDensity& mu1,
                    const SchroedingerSolution& sol, const std::vector<GridFunction>& candidates);

}  // namespace bridgekit
