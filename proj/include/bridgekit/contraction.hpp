#pragma once

#include <limits>

#include "bridgekit/measures.hpp"
#include "bridgekit/semigroup.hpp"
#include "bridgekit/sinkhorn.hpp"

namespace bridgekit {

/// Horizons u_t(b), v_t(b) under which the entropic cost contracts.
/// For lambda > 0, b must stay below b_max = -log(1 - e^{-lambda t}) / (lambda eps).
struct ContractionSchedule {
    double lambda;
    double epsilon;
    double t;
    double b;
    double u;
    double v;
    double b_max = std::numeric_limits<double>::infinity();
};

/// lambda = 0 is the limit u = t, v = b. Throws DomainError (carrying b_max) outside the domain.
ContractionSchedule contraction_schedule(double lambda, double epsilon, double t, double b);

// In this module T_t is the semigroup with generator (Laplacian - V' d/dx)/2,
// i.e. the model kernel at time t / eps, while Q^eps_b uses the model kernel at b.

/// Lebesgue density of (T_t (dmu/dm)) m.
GridDensity evolve_density(const KolmogorovModel& model, const GridDensity& mu, double t);

/// max over the exactly computed grid points of Q^eps_v(T_t f) - T_u(Q^eps_b f).
/// Nonpositive up to quadrature error when the inequality holds.
double check_commutation(const KolmogorovModel& model, const GridFunction& f, double t, double b);

/// max of Q^eps_1(T_t f) - T_s(Q^eps_1 f) - (sqrt t - sqrt s)^2 / 2. Heat model only
/// (ModelMismatchError otherwise).
double check_commutation_dimensional(const KolmogorovModel& model, const GridFunction& f, double t, double s);

struct ContractionCheck {
    double lhs;
    double rhs;
    double slack;  // rhs - lhs
};

/// A^eps_b(T_u mu_f, T_t mu_g) against A^eps_v(mu_f, mu_g) + eps [H(T_u mu_f|m) - H(mu_f|m)].
ContractionCheck check_entropic_contraction(const KolmogorovModel& model, const GridDensity& mu_f,
                                            const GridDensity& mu_g, double t, double b,
                                            const SolverOptions& options = {});

/// A^eps(T_t mu_f, T_s mu_g) against A^eps(mu_f, mu_g) + (sqrt t - sqrt s)^2/2 + eps [H(T_t mu_f|m) - H(mu_f|m)].
/// Heat model only.
ContractionCheck check_entropic_contraction_dimensional(const KolmogorovModel& model, const GridDensity& mu_f,
                                                        const GridDensity& mu_g, double t, double s,
                                                        const SolverOptions& options = {});

/// Gaussian law after time t in the model clock.
GaussianMeasure evolve_gaussian(const KolmogorovModel& model, const GaussianMeasure& g, double t);

/// W2(T_t g0, T_t g1) against e^{-lambda eps t/2} W2(g0, g1), model clock.
ContractionCheck check_wasserstein_contraction(const KolmogorovModel& model, const GaussianMeasure& g0,
                                               const GaussianMeasure& g1, double t);

/// Heat: W2^2(T_t g0, T_s g1) against W2^2(g0, g1) + (sqrt(eps t) - sqrt(eps s))^2, model clock.
ContractionCheck check_wasserstein_dimensional(const KolmogorovModel& model, const GaussianMeasure& g0,
                                               const GaussianMeasure& g1, double t, double s);

}  // namespace bridgekit
