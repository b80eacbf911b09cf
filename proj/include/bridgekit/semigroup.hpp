#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bridgekit/measures.hpp"

namespace bridgekit {

enum class Potential { zero, quadratic };

/// Reversible Kolmogorov dynamics with generator (eps/2)(Laplacian - V' d/dx).
///
/// Heat: V = 0, curvature 0, reversing measure Lebesgue.
/// Ornstein-Uhlenbeck: V = x^2/2, curvature 1, reversing measure N(0, 1).
///
/// The time dilation eps is carried by the kernel clock: the law of X_t started
/// at x is N(x, eps t) for heat and N(x e^{-eps t/2}, 1 - e^{-eps t}) for OU.
class KolmogorovModel {
public:
    static KolmogorovModel heat(double epsilon);
    static KolmogorovModel ornstein_uhlenbeck(double epsilon);

    Potential potential() const noexcept { return potential_; }
    double lambda() const noexcept { return potential_ == Potential::zero ? 0.0 : 1.0; }
    double epsilon() const noexcept { return epsilon_; }
    ReferenceKind reference_kind() const noexcept;
    std::string name() const;

    ReferenceMeasure reference(const Grid& grid) const;
    double potential_gradient(double x) const noexcept;

    double transition_mean(double x, double t) const;
    double transition_variance(double t) const;

    /// Same potential with another dilation.
    KolmogorovModel with_epsilon(double epsilon) const;

    friend bool operator==(const KolmogorovModel&, const KolmogorovModel&) = default;

private:
    KolmogorovModel(Potential potential, double epsilon);

    Potential potential_;
    double epsilon_;
};

/// Transition densities q_t(x_i, y_j) w.r.t. Lebesgue, sampled on a grid.
/// The m-weights enter through quadrature, so T_t f(x_i) = sum_j w_j q_ij f_j.
/// t = 0 gives the identity operator and stores no entries.
class KernelMatrix {
public:
    /// Rows whose transition law (mean +- 8 sd) lies inside the grid.
    static constexpr double support_sigmas = 8.0;
    static constexpr double mass_tolerance = 1e-6;

    const KolmogorovModel& model() const noexcept { return model_; }
    const Grid& grid() const noexcept { return grid_; }
    double time() const noexcept { return t_; }
    bool is_identity() const noexcept { return t_ == 0.0; }

    double entry(std::size_t i, std::size_t j) const;
    double log_entry(std::size_t i, std::size_t j) const;
    std::span<const double> row(std::size_t i) const;
    std::span<const double> log_row(std::size_t i) const;

    double row_mass(std::size_t i) const;
    bool row_is_interior(std::size_t i) const;
    std::vector<bool> interior_rows() const;

    /// Index range [first, last] covering mean +- 8 sd of row i, clamped to the grid.
    std::pair<std::size_t, std::size_t> row_support(std::size_t i) const;

private:
    friend KernelMatrix build_kernel(const KolmogorovModel& model, double t, const Grid& grid);
    KernelMatrix(KolmogorovModel model, Grid grid, double t);

    KolmogorovModel model_;
    Grid grid_;
    double t_;
    std::vector<double> entries_;
    std::vector<double> log_entries_;
    std::vector<double> log_weights_;
};

/// Throws TruncationError when an interior row misses unit mass by more than 1e-6
/// (kernel not resolved by the spacing) or when no row is interior (kernel wider than the grid).
KernelMatrix build_kernel(const KolmogorovModel& model, double t, const Grid& grid);

GridFunction apply_semigroup(const KernelMatrix& kernel, const GridFunction& f);

/// log T(e^{log_f}) evaluated with a per-row max shift; -inf entries of log_f are allowed.
std::vector<double> log_apply_semigroup(const KernelMatrix& kernel, std::span<const double> log_f);

/// Q^eps_u psi = eps log T_{eps u}(e^{psi/eps}). In the model clock T_{eps u} is the kernel at time u.
GridFunction entropic_hopf_lax(const KolmogorovModel& model, double u, const GridFunction& psi);
GridFunction entropic_hopf_lax(const KernelMatrix& kernel_u, const GridFunction& psi);

/// Rows whose support only reads entries marked valid. Used to track where a
/// composition of truncated operators is still exact.
std::vector<bool> propagate_validity(const KernelMatrix& kernel, const std::vector<bool>& valid);

}  // namespace bridgekit
