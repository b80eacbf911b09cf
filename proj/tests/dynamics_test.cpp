#include <cmath>

#include <gtest/gtest.h>

#include "bridgekit/dynamics.hpp"
#include "bridgekit/error.hpp"
#include "support.hpp"

using namespace bridgekit;
using bridgekit::testing::default_grid;
using bridgekit::testing::model_of;
using bridgekit::testing::unit_gaussian;

namespace {

struct Instance {
    KolmogorovModel model;
    Grid grid;
    SchroedingerSolution sol;
    double h0;
    double h1;
};

Instance solve(const KolmogorovModel& model, double x0 = -3.0, double x1 = 3.0) {
    const Grid g = Grid::around(x0, x1);
    auto sol = solve_schrodinger_system(model, unit_gaussian(x0, g), unit_gaussian(x1, g));
    const auto ref = model.reference(g);
    const double h0 = relative_entropy(sol.mu0, ref), h1 = relative_entropy(sol.mu1, ref);
    return {model, g, std::move(sol), h0, h1};
}

// int_0^1 Ddot^2 / (8 D) dt for the heat bridge, by composite Simpson.
double spreading_energy(double eps) {
    const auto p = HeatBridgeParams::make(eps, 0.0, 0.0);
    const int n = 2000;
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) / n;
        const double d = 1.0 + p.alpha * t * (1.0 - t);
        const double dd = p.alpha * (1.0 - 2.0 * t);
        const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        s += w * dd * dd / (8.0 * d);
    }
    return s / (3.0 * n);
}

class BothModels : public ::testing::TestWithParam<Potential> {};

}  // namespace

TEST(BridgePath, ClosedFormSatisfiesIdentities) {
    // The constructor asserts beta = v_cu + v_os and the osmotic formula.
    EXPECT_NO_THROW(build_closed_form_path(KolmogorovModel::heat(1.0), -3.0, 3.0, uniform_times(21), default_grid()));
    EXPECT_NO_THROW(build_closed_form_path(KolmogorovModel::ornstein_uhlenbeck(0.1), -3.0, 3.0, uniform_times(21),
                                           default_grid()));
}

TEST(BridgePath, RejectsMalformedInput) {
    const Grid g(-8.0, 8.0, 200);
    const auto model = KolmogorovModel::heat(1.0);
    const auto d = unit_gaussian(0.0, g);
    const auto z = GridFunction::constant(g, 0.0), one = GridFunction::constant(g, 1.0);
    EXPECT_THROW(BridgePath(model, {0.0, 1.0}, {d, d}, {z, z}, {z, z}, {z, z}), InputError);
    EXPECT_THROW(BridgePath(model, {0.0, 0.7, 0.5, 1.0}, {d, d, d, d}, {z, z, z, z}, {z, z, z, z}, {z, z, z, z}),
                 InputError);
    EXPECT_THROW(BridgePath(model, {0.1, 0.5, 1.0}, {d, d, d}, {z, z, z}, {z, z, z}, {z, z, z}), InputError);
    EXPECT_THROW(BridgePath(model, {0.0, 0.5, 1.0}, {d, d, d}, {z, z}, {z, z, z}, {z, z, z}), InputError);
    // beta != v_cu + v_os
    EXPECT_THROW(BridgePath(model, {0.0, 0.5, 1.0}, {d, d, d}, {one, one, one}, {z, z, z}, {z, z, z}), InputError);
}

TEST(BridgePath, SinkhornDriftMatchesClosedForm) {
    for (Potential p : {Potential::zero, Potential::quadratic}) {
        const auto in = solve(model_of(p, 1.0));
        const auto times = uniform_times(21);
        const auto cf = build_closed_form_path(in.model, -3.0, 3.0, times, in.grid);
        const auto sk = build_sinkhorn_path(in.sol, times);
        double worst = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k)
            for (std::size_t i = 0; i < in.grid.size(); ++i)
                if (cf.densities()[k][i] > 1e-6)
                    worst = std::max(worst, std::abs(cf.forward_drift()[k][i] - sk.forward_drift()[k][i]));
        EXPECT_LT(worst, 1e-2) << in.model.name();
    }
}

TEST(BridgePath, CentredHeatVelocitiesAreOdd) {
    const Grid g = Grid::around(0.0, 0.0, 10.0);
    const auto path = build_closed_form_path(KolmogorovModel::heat(1.0), 0.0, 0.0, uniform_times(11), g);
    const std::size_t n = g.size();
    for (std::size_t k = 0; k < path.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(path.current_velocity()[k][i], -path.current_velocity()[k][n - 1 - i], 1e-9);
            EXPECT_NEAR(path.osmotic_velocity()[k][i], -path.osmotic_velocity()[k][n - 1 - i], 1e-9);
        }
    }
}

TEST(BridgePath, UnderflowIsIllConditioned) {
    // A narrow marginal leaves most of the grid at exactly zero density.
    const Grid g = default_grid();
    const auto narrow = gaussian_grid_density(GaussianMeasure(-3.0, 0.01), g);
    const auto sol = solve_schrodinger_system(KolmogorovModel::heat(1.0), narrow, unit_gaussian(3.0, g));
    EXPECT_THROW(build_sinkhorn_path(sol, uniform_times(11)), IllConditionedPathError);
}

TEST(Actions, StationaryPathCarriesNoAction) {
    const auto model = KolmogorovModel::ornstein_uhlenbeck(1.0);
    const Grid g = Grid::around(0.0, 0.0, 10.0);
    const auto cf = build_closed_form_path(model, 0.0, 0.0, uniform_times(41), g);
    EXPECT_NEAR(forward_action(cf), 0.0, 1e-8);
    const auto d = symmetric_decomposition(cf, 0.0, 0.0);
    EXPECT_NEAR(d.current_action, 0.0, 1e-8);
    EXPECT_NEAR(d.osmotic_action, 0.0, 1e-8);
    EXPECT_NEAR(d.total, 0.0, 1e-8);
    EXPECT_NEAR(continuity_residual(cf, ResidualForm::current), 0.0, 1e-12);
    EXPECT_NEAR(continuity_residual(cf, ResidualForm::weighted), 0.0, 1e-12);

    const auto m = unit_gaussian(0.0, g);
    const auto sol = solve_schrodinger_system(model, m, m);
    EXPECT_NEAR(forward_action(build_sinkhorn_path(sol, uniform_times(41))), 0.0, 1e-8);
}

TEST(Actions, HeatForwardIdentity) {
    const auto in = solve(KolmogorovModel::heat(1.0));
    const auto sk = build_sinkhorn_path(in.sol, uniform_times(41));
    EXPECT_NEAR(forward_action(sk) + in.h0, in.sol.cost_unscaled, 1e-3);
}

TEST(Actions, HeatDecomposition) {
    const auto in = solve(KolmogorovModel::heat(1.0));
    for (const auto& path : {build_sinkhorn_path(in.sol, uniform_times(41)),
                             build_closed_form_path(in.model, -3.0, 3.0, uniform_times(41), in.grid)}) {
        const auto d = symmetric_decomposition(path, in.h0, in.h1);
        EXPECT_NEAR(d.total, in.sol.cost_unscaled, 1e-3);
        EXPECT_GE(d.osmotic_action, 0.0);
        EXPECT_NEAR(d.cross_term, 0.0, 1e-8);
    }
}

TEST_P(BothModels, DecompositionAndForwardIdentity) {
    for (double eps : {1.0, 0.5}) {
        const auto in = solve(model_of(GetParam(), eps));
        const auto path = build_sinkhorn_path(in.sol, uniform_times(41));
        const auto d = symmetric_decomposition(path, in.h0, in.h1);
        const double fwd = forward_action(path) + in.h0;
        EXPECT_NEAR(d.total, fwd, 2e-3) << eps;
        EXPECT_NEAR(d.total, in.sol.cost_unscaled, 2e-3) << eps;
        EXPECT_NEAR(d.total, 0.5 * (in.h0 + in.h1) + d.current_action + d.osmotic_action, 1e-12);
    }
}

TEST_P(BothModels, LowerBoundHolds) {
    const auto in = solve(model_of(GetParam(), 1.0));
    const double eps = in.model.epsilon();
    const double slack = eps * in.sol.cost_unscaled - 0.5 * eps * (in.h0 + in.h1) - 18.0;
    EXPECT_GE(slack, 0.0);
}

TEST(Actions, HeatLowerBoundSlackExceedsOsmoticBySpreadingEnergy) {
    // Along the entropic path, eps * current action is W2^2/2 plus the energy
    // spent widening the Gaussian, so the bound's slack is eps * osmotic plus that term.
    const auto in = solve(KolmogorovModel::heat(1.0));
    const auto path = build_closed_form_path(in.model, -3.0, 3.0, uniform_times(41), in.grid);
    const auto d = symmetric_decomposition(path, in.h0, in.h1);
    const double extra = spreading_energy(1.0);
    EXPECT_NEAR(d.current_action - 18.0, extra, 1e-4);
    const double slack = in.sol.cost_unscaled - 0.5 * (in.h0 + in.h1) - 18.0;
    EXPECT_NEAR(slack - d.osmotic_action, extra, 1e-4);
    EXPECT_GT(extra, 2e-3);
}

TEST(Actions, TimeReversalKeepsDecomposition) {
    for (Potential p : {Potential::zero, Potential::quadratic}) {
        const auto in = solve(model_of(p, 1.0));
        const auto path = build_sinkhorn_path(in.sol, uniform_times(41));
        const auto rev = time_reversed(path);
        const auto d = symmetric_decomposition(path, in.h0, in.h1);
        const auto r = symmetric_decomposition(rev, in.h1, in.h0);
        EXPECT_NEAR(d.total, r.total, 1e-10);
        // Forward action of the reversed path starts from mu1.
        EXPECT_NEAR(forward_action(rev) + in.h1, in.sol.cost_unscaled, 2e-3);
        // It coincides with the path of the swapped problem.
        const auto swapped = solve_schrodinger_system(in.model, in.sol.mu1, in.sol.mu0);
        const auto sp = build_sinkhorn_path(swapped, uniform_times(41));
        for (std::size_t k = 0; k < sp.size(); ++k) {
            double worst = 0.0;
            for (std::size_t i = 0; i < in.grid.size(); ++i)
                worst = std::max(worst, std::abs(sp.densities()[k][i] - rev.densities()[k][i]));
            EXPECT_LT(worst, 1e-6);
        }
    }
}

TEST_P(BothModels, ResidualsOnClosedFormPaths) {
    const auto model = model_of(GetParam(), 1.0);
    const auto coarse = build_closed_form_path(model, -3.0, 3.0, uniform_times(41), Grid::around(-3.0, 3.0, 8.0, 512));
    const auto fine = build_closed_form_path(model, -3.0, 3.0, uniform_times(81), Grid::around(-3.0, 3.0, 8.0, 1023));
    for (auto form : {ResidualForm::current, ResidualForm::fokker_planck, ResidualForm::weighted}) {
        const double r4 = continuity_residual(coarse, form, 4);
        EXPECT_LT(r4, 1e-3);
        EXPECT_GE(r4 / continuity_residual(fine, form, 4), 3.5);
        // Second order: the factor is close to 4.
        const double ratio2 = continuity_residual(coarse, form, 2) / continuity_residual(fine, form, 2);
        EXPECT_GE(ratio2, 3.5);
        EXPECT_LT(ratio2, 4.5);
    }
    const double cur = continuity_residual(coarse, ResidualForm::current);
    const double wtd = continuity_residual(coarse, ResidualForm::weighted);
    EXPECT_NEAR(cur, wtd, 1e-8 * cur);
}

TEST(Residual, NeedsUniformTimes) {
    const Grid g(-10.0, 10.0, 200);
    const auto path = build_closed_form_path(KolmogorovModel::heat(1.0), 0.0, 0.0, {0.0, 0.1, 0.2, 0.5, 0.6, 1.0}, g);
    EXPECT_THROW(continuity_residual(path, ResidualForm::current, 2), InputError);
    EXPECT_THROW(continuity_residual(path, ResidualForm::current, 3), InputError);
}

INSTANTIATE_TEST_SUITE_P(Kernels, BothModels, ::testing::Values(Potential::zero, Potential::quadratic),
                         [](const auto& info) { return info.param == Potential::zero ? "heat" : "ou"; });
