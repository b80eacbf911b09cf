#include "bridgekit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bridgekit/error.hpp"

namespace bridgekit {

namespace {

constexpr double kUnderflowShare = 0.2;

std::vector<double> trapezoid_time_weights(const std::vector<double>& t) {
    std::vector<double> w(t.size(), 0.0);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        const double dt = t[k + 1] - t[k];
        w[k] += 0.5 * dt;
        w[k + 1] += 0.5 * dt;
    }
    return w;
}

// (1/eps) int int (a b) dmu dt over the support mask.
double action_integral(const BridgePath& path, const std::vector<GridFunction>& a, const std::vector<GridFunction>& b) {
    const Grid& grid = path.grid();
    const auto tw = trapezoid_time_weights(path.times());
    double total = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const auto& mu = path.densities()[k];
        double s = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (mu[i] <= BridgePath::density_floor) continue;
            s += grid.weight(i) * a[k][i] * b[k][i] * mu[i];
        }
        total += tw[k] * s;
    }
    return total / path.model().epsilon();
}

double velocity_scale(double v) { return std::max(1.0, std::abs(v)); }

std::vector<double> log_density_vs_reference(const GridDensity& mu, const ReferenceMeasure& m) {
    const auto lm = m.log_weights();
    std::vector<double> out(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) out[i] = std::log(mu[i]) - lm[i];
    return out;
}

bool stencil_positive(const GridDensity& mu, std::size_t i) {
    const std::size_t n = mu.size();
    const std::size_t a = i < 4 ? 0 : i - 4;
    const std::size_t b = std::min(n - 1, i + 4);
    for (std::size_t j = a; j <= b; ++j) {
        if (!(mu[j] > 0.0)) return false;
    }
    return true;
}

GridFunction masked(const Grid& grid, std::vector<double> v, const GridDensity& mu) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(mu[i] > BridgePath::density_floor)) v[i] = 0.0;
    }
    return GridFunction(grid, std::move(v));
}

}  // namespace

// --- BridgePath ---------------------------------------------------------------

BridgePath::BridgePath(KolmogorovModel model, std::vector<double> times, std::vector<GridDensity> densities,
                       std::vector<GridFunction> forward_drift, std::vector<GridFunction> current_velocity,
                       std::vector<GridFunction> osmotic_velocity)
    : model_(model),
      times_(std::move(times)),
      densities_(std::move(densities)),
      beta_(std::move(forward_drift)),
      vcu_(std::move(current_velocity)),
      vos_(std::move(osmotic_velocity)) {
    const std::size_t T = times_.size();
    if (T < 3) throw InputError("BridgePath: need at least 3 time samples");
    if (densities_.size() != T || beta_.size() != T || vcu_.size() != T || vos_.size() != T) {
        throw InputError("BridgePath: arrays must share one length");
    }
    if (!std::is_sorted(times_.begin(), times_.end()) ||
        std::adjacent_find(times_.begin(), times_.end()) != times_.end()) {
        throw InputError("BridgePath: times must be strictly increasing");
    }
    if (std::abs(times_.front()) > 1e-12 || std::abs(times_.back() - 1.0) > 1e-12) {
        throw InputError("BridgePath: times must start at 0 and end at 1");
    }
    const Grid& g = densities_.front().grid();
    if (g.size() < 5) throw InputError("BridgePath: grid needs at least 5 points");
    const ReferenceMeasure m = model_.reference(g);
    const double half_eps = 0.5 * model_.epsilon();

    for (std::size_t k = 0; k < T; ++k) {
        const auto& mu = densities_[k];
        if (!(mu.grid() == g) || !(beta_[k].grid() == g) || !(vcu_[k].grid() == g) || !(vos_[k].grid() == g)) {
            throw InputError("BridgePath: all samples must share one grid");
        }
        const auto lr = log_density_vs_reference(mu, m);
        const auto grad = central_gradient(g, lr, 4);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!(mu[i] > density_floor)) continue;
            const double sum = vcu_[k][i] + vos_[k][i];
            if (std::abs(beta_[k][i] - sum) > identity_tolerance * velocity_scale(beta_[k][i])) {
                std::ostringstream os;
                os << "BridgePath: beta != v_cu + v_os at t = " << times_[k] << ", x = " << g[i];
                throw InputError(os.str());
            }
            if (!stencil_positive(mu, i)) continue;
            const double expect = half_eps * grad[i];
            if (std::abs(vos_[k][i] - expect) > identity_tolerance * velocity_scale(expect)) {
                std::ostringstream os;
                os << "BridgePath: osmotic velocity disagrees with (eps/2) grad log(dmu/dm) at t = " << times_[k]
                   << ", x = " << g[i];
                throw InputError(os.str());
            }
        }
    }
}

std::vector<double> uniform_times(std::size_t count) {
    if (count < 2) throw InputError("uniform_times: need at least 2 samples");
    std::vector<double> t(count);
    for (std::size_t k = 0; k < count; ++k) t[k] = static_cast<double>(k) / static_cast<double>(count - 1);
    return t;
}

BridgePath build_closed_form_path(const KolmogorovModel& model, double x0, double x1,
                                  const std::vector<double>& times, const Grid& grid, const BridgeOptions& options) {
    const double half_eps = 0.5 * model.epsilon();
    std::vector<GridDensity> dens;
    std::vector<GridFunction> beta, vcu, vos;
    for (double t : times) {
        const auto mom = bridge_moments(model, x0, x1, t, options);
        auto mu = bridge_density(mom, grid);
        const auto psi = dual_potential_coefficients(model, x0, x1, t, options);
        std::vector<double> b(grid.size()), c(grid.size()), o(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double z = grid[i];
            // log(dmu/dm) = log mu + V + const
            o[i] = half_eps * (-(z - mom.mean) / mom.variance + model.potential_gradient(z));
            c[i] = current_velocity_at(mom, z);
            b[i] = psi.gradient(z);
        }
        beta.push_back(masked(grid, std::move(b), mu));
        vcu.push_back(masked(grid, std::move(c), mu));
        vos.push_back(masked(grid, std::move(o), mu));
        dens.push_back(std::move(mu));
    }
    return BridgePath(model, times, std::move(dens), std::move(beta), std::move(vcu), std::move(vos));
}

BridgePath build_sinkhorn_path(const SchroedingerSolution& sol, const std::vector<double>& times, int order) {
    if (!sol.converged) {
        throw ConvergenceError("build_sinkhorn_path: solution did not converge", sol.marginal_error, sol.iterations);
    }
    if (std::abs(sol.horizon - 1.0) > 1e-12) {
        throw InputError("build_sinkhorn_path: only unit-horizon solutions describe a bridge on [0, 1]");
    }
    const Grid& grid = sol.grid;
    const std::size_t n = grid.size();
    const double eps = sol.model.epsilon();
    const ReferenceMeasure ref = sol.model.reference(grid);
    const auto log_m = ref.log_weights();

    std::vector<GridDensity> dens;
    std::vector<GridFunction> beta, vcu, vos;
    for (double t : times) {
        const auto p = interpolation_potentials(sol, t);
        std::vector<double> rho(n), lr(n), psi(n);
        std::size_t bad = 0;
        for (std::size_t i = 0; i < n; ++i) {
            lr[i] = p.phi[i] + p.psi[i];
            rho[i] = std::exp(lr[i] + log_m[i]);
            psi[i] = p.psi[i];
            if (!std::isfinite(lr[i]) || !std::isfinite(psi[i]) || rho[i] == 0.0) {
                ++bad;
                lr[i] = 0.0;
                psi[i] = 0.0;
            }
        }
        if (static_cast<double>(bad) > kUnderflowShare * static_cast<double>(n)) {
            std::ostringstream os;
            os << "build_sinkhorn_path: density underflows on " << bad << " of " << n << " grid points at t = " << t;
            throw IllConditionedPathError(os.str());
        }
        auto mu = GridDensity::renormalized(grid, std::move(rho), interpolation_max_drift);
        auto gpsi = central_gradient(grid, psi, order);
        auto glr = central_gradient(grid, lr, order);
        std::vector<double> b(n), c(n), o(n);
        for (std::size_t i = 0; i < n; ++i) {
            b[i] = eps * gpsi[i];
            o[i] = 0.5 * eps * glr[i];
            c[i] = b[i] - o[i];
            if (mu[i] > BridgePath::density_floor && !(std::isfinite(b[i]) && std::isfinite(o[i]))) {
                throw IllConditionedPathError("build_sinkhorn_path: non-finite velocity on the support");
            }
        }
        beta.push_back(masked(grid, std::move(b), mu));
        vcu.push_back(masked(grid, std::move(c), mu));
        vos.push_back(masked(grid, std::move(o), mu));
        dens.push_back(std::move(mu));
    }
    return BridgePath(sol.model, times, std::move(dens), std::move(beta), std::move(vcu), std::move(vos));
}

BridgePath time_reversed(const BridgePath& path) {
    const std::size_t T = path.size();
    const Grid& grid = path.grid();
    std::vector<double> times(T);
    std::vector<GridDensity> dens;
    std::vector<GridFunction> beta, vcu, vos;
    for (std::size_t k = 0; k < T; ++k) {
        const std::size_t src = T - 1 - k;
        times[k] = k == 0 ? 0.0 : (k + 1 == T ? 1.0 : 1.0 - path.times()[src]);
        dens.push_back(path.densities()[src]);
        std::vector<double> b(grid.size()), c(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            c[i] = -path.current_velocity()[src][i];
            b[i] = c[i] + path.osmotic_velocity()[src][i];
        }
        beta.emplace_back(grid, std::move(b));
        vcu.emplace_back(grid, std::move(c));
        vos.push_back(path.osmotic_velocity()[src]);
    }
    return BridgePath(path.model(), std::move(times), std::move(dens), std::move(beta), std::move(vcu),
                      std::move(vos));
}

double forward_action(const BridgePath& path) {
    return 0.5 * action_integral(path, path.forward_drift(), path.forward_drift());
}

Decomposition symmetric_decomposition(const BridgePath& path, double h0, double h1) {
    Decomposition d{};
    d.current_action = 0.5 * action_integral(path, path.current_velocity(), path.current_velocity());
    d.osmotic_action = 0.5 * action_integral(path, path.osmotic_velocity(), path.osmotic_velocity());
    d.cross_term = action_integral(path, path.current_velocity(), path.osmotic_velocity());
    d.total = 0.5 * (h0 + h1) + d.current_action + d.osmotic_action;
    return d;
}

double continuity_residual(const BridgePath& path, ResidualForm form, int order) {
    if (order != 2 && order != 4) throw InputError("continuity_residual: order must be 2 or 4");
    const std::size_t T = path.size();
    const std::size_t reach = order == 4 ? 2 : 1;
    if (T < 2 * reach + 1) throw InputError("continuity_residual: not enough time samples for the stencil");
    const auto& times = path.times();
    const double dt = times[1] - times[0];
    for (std::size_t k = 1; k + 1 < T; ++k) {
        if (std::abs(times[k + 1] - times[k] - dt) > 1e-9 * dt) {
            throw InputError("continuity_residual: times must be uniform");
        }
    }

    const Grid& grid = path.grid();
    const std::size_t n = grid.size();
    const double eps = path.model().epsilon();
    const auto mref = path.model().reference(grid);
    const auto& mu = path.densities();

    // Values whose time derivative enters: mu itself, or rho = dmu/dm.
    auto state = [&](std::size_t k, std::size_t i) {
        return form == ResidualForm::weighted ? mu[k][i] / mref.weights()[i] : mu[k][i];
    };
    auto time_derivative = [&](std::size_t k, std::size_t i) {
        if (order == 2) return (state(k + 1, i) - state(k - 1, i)) / (2.0 * dt);
        return (-state(k + 2, i) + 8.0 * state(k + 1, i) - 8.0 * state(k - 1, i) + state(k - 2, i)) / (12.0 * dt);
    };

    double worst = 0.0;
    std::vector<double> flux(n);
    for (std::size_t k = reach; k + reach < T; ++k) {
        std::vector<double> r(n);
        switch (form) {
            case ResidualForm::current: {
                for (std::size_t i = 0; i < n; ++i) flux[i] = mu[k][i] * path.current_velocity()[k][i];
                const auto div = central_gradient(grid, flux, order);
                for (std::size_t i = 0; i < n; ++i) r[i] = time_derivative(k, i) + div[i];
                break;
            }
            case ResidualForm::fokker_planck: {
                const auto dmu = central_gradient(grid, mu[k].values(), order);
                for (std::size_t i = 0; i < n; ++i) {
                    const double drift = path.forward_drift()[k][i] - 0.5 * eps * path.model().potential_gradient(grid[i]);
                    flux[i] = mu[k][i] * drift - 0.5 * eps * dmu[i];
                }
                const auto div = central_gradient(grid, flux, order);
                for (std::size_t i = 0; i < n; ++i) r[i] = time_derivative(k, i) + div[i];
                break;
            }
            case ResidualForm::weighted: {
                std::vector<double> ev(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const double v = path.model().potential() == Potential::zero ? 0.0 : 0.5 * grid[i] * grid[i];
                    ev[i] = v;
                    flux[i] = std::exp(-v) * state(k, i) * path.current_velocity()[k][i];
                }
                const auto div = central_gradient(grid, flux, order);
                for (std::size_t i = 0; i < n; ++i) {
                    // |r| in L1(m) is integrated against the reference below.
                    r[i] = (time_derivative(k, i) + std::exp(ev[i]) * div[i]) * mref.weights()[i];
                }
                break;
            }
        }
        double l1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) l1 += grid.weight(i) * std::abs(r[i]);
        worst = std::max(worst, l1);
    }
    return worst;
}

}  // namespace bridgekit
