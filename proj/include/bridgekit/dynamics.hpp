#pragma once

#include <vector>

#include "bridgekit/gaussian_bridge.hpp"
#include "bridgekit/measures.hpp"
#include "bridgekit/semigroup.hpp"
#include "bridgekit/sinkhorn.hpp"

namespace bridgekit {

/// Time samples of an interpolation with its velocity fields, eps-scaled:
///   forward drift  beta  = eps grad log T_{1-t} g1
///   osmotic        v_os  = (eps/2) grad log(dmu_t/dm)
///   current        v_cu  = beta - v_os
/// Velocities are set to 0 where the density is at or below density_floor.
class BridgePath {
public:
    static constexpr double density_floor = 1e-12;
    static constexpr double identity_tolerance = 1e-6;

    /// Validates shapes, sorted times with both endpoints, shared grid,
    /// beta = v_cu + v_os and v_os = (eps/2) grad log(dmu/dm) on the support.
    BridgePath(KolmogorovModel model, std::vector<double> times, std::vector<GridDensity> densities,
               std::vector<GridFunction> forward_drift, std::vector<GridFunction> current_velocity,
               std::vector<GridFunction> osmotic_velocity);

    const KolmogorovModel& model() const noexcept { return model_; }
    const Grid& grid() const noexcept { return densities_.front().grid(); }
    std::size_t size() const noexcept { return times_.size(); }
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<GridDensity>& densities() const noexcept { return densities_; }
    const std::vector<GridFunction>& forward_drift() const noexcept { return beta_; }
    const std::vector<GridFunction>& current_velocity() const noexcept { return vcu_; }
    const std::vector<GridFunction>& osmotic_velocity() const noexcept { return vos_; }

private:
    KolmogorovModel model_;
    std::vector<double> times_;
    std::vector<GridDensity> densities_;
    std::vector<GridFunction> beta_;
    std::vector<GridFunction> vcu_;
    std::vector<GridFunction> vos_;
};

/// T equally spaced samples of [0, 1].
std::vector<double> uniform_times(std::size_t count);

/// Path of the Gaussian closed form between N(x0, 1) and N(x1, 1).
BridgePath build_closed_form_path(const KolmogorovModel& model, double x0, double x1,
                                  const std::vector<double>& times, const Grid& grid,
                                  const BridgeOptions& options = {});

/// Path of a converged Sinkhorn solution; spatial derivatives of the log
/// potentials by central differences of the given order.
/// Throws IllConditionedPathError when more than 20% of the grid underflows.
BridgePath build_sinkhorn_path(const SchroedingerSolution& sol, const std::vector<double>& times,
                               int order = 4);

/// Path run backwards: times 1 - t, current velocity negated, osmotic unchanged,
/// forward drift of the reversed process = -v_cu + v_os.
BridgePath time_reversed(const BridgePath& path);

/// (1/eps) int int |beta|^2/2 dmu dt, trapezoid in space and time.
double forward_action(const BridgePath& path);

struct Decomposition {
    double current_action;
    double osmotic_action;
    double cross_term;  // (1/eps) int int <v_cu, v_os> dmu dt
    double total;       // (H0 + H1)/2 + current + osmotic
};

Decomposition symmetric_decomposition(const BridgePath& path, double h0, double h1);

enum class ResidualForm {
    current,        // d_t mu + d_x(mu v_cu)
    fokker_planck,  // d_t mu + d_x(mu [beta - (eps/2)(V' + d_x log mu)])
    weighted,       // d_t rho + e^V d_x(e^{-V} rho v_cu), rho = dmu/dm, measured in L1(m)
};

/// Max over interior time samples of the L1 norm in space of the PDE residual.
/// Central differences of the given order (2 or 4) in time and space; times must be uniform.
double continuity_residual(const BridgePath& path, ResidualForm form, int order = 4);

}  // namespace bridgekit
