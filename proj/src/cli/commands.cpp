#include "bridgekit/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "bridgekit/cli/csv.hpp"
#include "bridgekit/cli/svg.hpp"
#include "bridgekit/contraction.hpp"
#include "bridgekit/dual.hpp"
#include "bridgekit/dynamics.hpp"
#include "bridgekit/gaussian_bridge.hpp"
#include "bridgekit/sinkhorn.hpp"

namespace bridgekit::cli {

namespace {

namespace fs = std::filesystem;

std::string in_dir(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError(fmt::format("cannot create output directory '{}': {}", dir, ec.message()));
}

SolverOptions solver_options(const ProblemConfig& c) {
    SolverOptions o;
    o.tol = c.tol;
    o.max_iterations = c.maxiter;
    return o;
}

double scale_of(double v) { return std::max(1.0, std::abs(v)); }

struct Problem {
    KolmogorovModel model;
    Grid grid;
    GridDensity mu0;
    GridDensity mu1;
    double h0;
    double h1;
};

Problem make_problem(const ProblemConfig& c) {
    const Grid grid = c.grid();
    const KolmogorovModel model = c.model();
    auto mu0 = gaussian_grid_density(GaussianMeasure(c.x0, 1.0), grid);
    auto mu1 = gaussian_grid_density(GaussianMeasure(c.x1, 1.0), grid);
    const auto ref = model.reference(grid);
    const double h0 = relative_entropy(mu0, ref);
    const double h1 = relative_entropy(mu1, ref);
    return {model, grid, std::move(mu0), std::move(mu1), h0, h1};
}

double sup_difference(const GridDensity& a, const GridDensity& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

std::string tag(double v) { return fmt::format("{:g}", v); }

}  // namespace

Suite parse_suite(const std::string& name) {
    if (name == "duality") return Suite::duality;
    if (name == "decomposition") return Suite::decomposition;
    if (name == "contraction") return Suite::contraction;
    if (name == "all") return Suite::all;
    throw ConfigError(fmt::format("unknown suite '{}' (duality, decomposition, contraction, all)", name), 0);
}

std::vector<double> parse_epsilon_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto a = item.find_first_not_of(' ');
        const auto b = item.find_last_not_of(' ');
        if (a == std::string::npos) throw ConfigError("empty entry in --eps", 0);
        item = item.substr(a, b - a + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size() || !(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError(fmt::format("--eps entries must be positive numbers, got '{}'", item), 0);
        }
        if (!out.empty() && !(v < out.back())) {
            throw ConfigError("--eps must be sorted in strictly descending order", 0);
        }
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("--eps needs at least one value", 0);
    return out;
}

CheckRow make_check(std::string name, double lhs, double rhs, double tolerance, CheckKind kind) {
    const double slack = rhs - lhs;
    bool pass = false;
    switch (kind) {
        case CheckKind::identity: pass = std::abs(slack) <= tolerance; break;
        case CheckKind::inequality: pass = slack >= -tolerance; break;
        case CheckKind::strict: pass = slack > 0.0; break;
    }
    return {std::move(name), lhs, rhs, slack, tolerance, pass};
}

std::vector<GridFunction> commutation_test_functions(const Grid& grid) {
    auto sample = [&](auto fn) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) v[i] = fn(grid[i]);
        return GridFunction(grid, std::move(v));
    };
    return {
        sample([](double x) { return std::min(4.0, 0.5 * (x - 0.5) * (x - 0.5) - 1.0); }),
        sample([](double x) { return std::max(-3.0, -0.25 * x * x) + 0.5 * std::cos(x); }),
        sample([](double x) { return std::min(2.0, (x + 1.0) * (x + 1.0)) + 0.3 * std::sin(2.0 * x); }),
        sample([](double x) { return std::sin(x) + 0.5 * std::sin(3.0 * x + 1.0); }),
        sample([](double) { return 1.5; }),
    };
}

// --- suites -----------------------------------------------------------------

std::vector<CheckRow> duality_checks(const ProblemConfig& config) {
    const Problem p = make_problem(config);
    const double eps = p.model.epsilon();
    const auto sol = solve_schrodinger_system(p.model, p.mu0, p.mu1, solver_options(config));
    const auto k1 = build_kernel(p.model, 1.0, p.grid);
    const double primal = sol.cost_scaled;
    const double tol = 1e-6 * scale_of(primal);

    std::vector<CheckRow> rows;
    const GridFunction star = optimal_dual_potential(sol);
    const double at_star = dual_functional(k1, p.mu0, p.mu1, star);
    rows.push_back(make_check("strong_duality", at_star, primal, 1e-6 * std::abs(primal), CheckKind::identity));

    const double at_zero = dual_functional(k1, p.mu0, p.mu1, GridFunction::constant(p.grid, 0.0));
    // Q(0) = 0 holds on interior rows; truncated edge rows leave quadrature-size noise.
    rows.push_back(make_check("dual_at_zero", at_zero, eps * p.h0, tol, CheckKind::identity));

    // The closed form is the optimizer up to an additive constant.
    const GridFunction closed = dual_potential(p.model, config.x0, config.x1, 1.0, p.grid);
    rows.push_back(make_check("closed_form_potential", dual_functional(k1, p.mu0, p.mu1, closed), primal,
                              1e-4 * std::abs(primal), CheckKind::identity));

    std::mt19937_64 rng(0x5eed2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const double amp = 0.01 + 0.5 * unit(rng);
        const double freq = 0.2 + 1.8 * unit(rng);
        const double phase = 6.283185307179586 * unit(rng);
        const double a = -1.0 + 2.0 * unit(rng);
        const double centre = -4.0 + 8.0 * unit(rng);
        const double cap = 1.0 + 19.0 * unit(rng);
        std::vector<double> v(p.grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double x = p.grid[i];
            const double wave = amp * std::sin(freq * x + phase);
            v[i] = k % 2 == 0 ? star[i] + wave
                              : std::clamp(a * (x - centre) * (x - centre), -cap, cap) + wave;
        }
        const double value = dual_functional(k1, p.mu0, p.mu1, GridFunction(p.grid, std::move(v)));
        rows.push_back(make_check(fmt::format("weak_duality_{:02d}", k), value, primal, tol, CheckKind::inequality));
    }

    std::vector<double> bumped(p.grid.size());
    for (std::size_t i = 0; i < bumped.size(); ++i) bumped[i] = star[i] + 0.1 * std::sin(p.grid[i]);
    const double gap_star = primal - at_star;
    const double gap_bumped = primal - dual_functional(k1, p.mu0, p.mu1, GridFunction(p.grid, std::move(bumped)));
    rows.push_back(make_check("perturbed_gap_larger", gap_star, gap_bumped, 0.0, CheckKind::strict));
    return rows;
}

std::vector<CheckRow> decomposition_checks(const ProblemConfig& config) {
    const Problem p = make_problem(config);
    const double eps = p.model.epsilon();
    const auto sol = solve_schrodinger_system(p.model, p.mu0, p.mu1, solver_options(config));
    const auto swapped = solve_schrodinger_system(p.model, p.mu1, p.mu0, solver_options(config));
    const double cost = sol.cost_unscaled;

    std::vector<CheckRow> rows;
    const auto path = build_sinkhorn_path(sol, uniform_times(config.time_samples));
    const auto d = symmetric_decomposition(path, p.h0, p.h1);
    rows.push_back(make_check("decomposition_identity", d.total, cost, 2e-3, CheckKind::identity));
    rows.push_back(make_check("forward_identity", forward_action(path) + p.h0, cost, 2e-3, CheckKind::identity));

    const double w2 = wasserstein2_gaussian(GaussianMeasure(config.x0, 1.0), GaussianMeasure(config.x1, 1.0));
    const double bound = 0.5 * eps * (p.h0 + p.h1) + 0.5 * w2;
    rows.push_back(make_check("lower_bound", bound, eps * cost, 1e-9 * scale_of(cost), CheckKind::inequality));
    rows.push_back(make_check("osmotic_nonnegative", 0.0, d.osmotic_action, 0.0, CheckKind::inequality));
    rows.push_back(make_check("symmetry", swapped.cost_unscaled, cost, 1e-8, CheckKind::identity));

    for (double t : {0.25, 0.5, 0.75}) {
        const auto numeric = entropic_interpolation(sol, t);
        const auto exact = bridge_density(bridge_moments(p.model, config.x0, config.x1, t), p.grid);
        rows.push_back(make_check("oracle_t" + tag(t), sup_difference(numeric, exact), 0.0, 1e-3, CheckKind::identity));
    }

    const auto closed = build_closed_form_path(p.model, config.x0, config.x1, uniform_times(config.time_samples), p.grid);
    rows.push_back(make_check("continuity_current", continuity_residual(closed, ResidualForm::current), 0.0, 1e-3,
                              CheckKind::identity));
    rows.push_back(make_check("continuity_fokker_planck", continuity_residual(closed, ResidualForm::fokker_planck), 0.0,
                              1e-3, CheckKind::identity));
    rows.push_back(make_check("continuity_weighted", continuity_residual(closed, ResidualForm::weighted), 0.0, 1e-3,
                              CheckKind::identity));
    return rows;
}

std::vector<CheckRow> contraction_checks(const ProblemConfig& config) {
    const Problem p = make_problem(config);
    const KolmogorovModel& model = p.model;
    const double eps = model.epsilon();
    // Stacked kernels need room for their 8-sd supports, so commutation runs on a wide grid.
    const Grid wide(std::min(p.grid.lo(), -30.0), std::max(p.grid.hi(), 30.0), 1201);
    const auto fns = commutation_test_functions(wide);
    const SolverOptions opts = solver_options(config);
    const GaussianMeasure g0(config.x0, 1.0);
    const GaussianMeasure g1(config.x1, 1.0);
    const std::vector<double> ts{0.25, 0.5, 1.0};

    std::vector<CheckRow> rows;
    for (double t : ts) {
        const double b_max = contraction_schedule(model.lambda(), eps, t, 1e-12).b_max;
        for (double b : {0.1, 0.2, std::min(0.4, 0.5 * b_max)}) {
            const std::string at = fmt::format("t{}_b{:.4g}", tag(t), b);
            for (std::size_t k = 0; k < fns.size(); ++k) {
                rows.push_back(make_check(fmt::format("commutation_{}_f{}", at, k),
                                          check_commutation(model, fns[k], t, b), 0.0,
                                          1e-6 * (1.0 + fns[k].sup_norm()), CheckKind::inequality));
            }
            const auto c = check_entropic_contraction(model, p.mu0, p.mu1, t, b, opts);
            rows.push_back(make_check("entropic_contraction_" + at, c.lhs, c.rhs, 1e-4 * scale_of(c.rhs),
                                      CheckKind::inequality));
        }
    }
    for (double t : ts) {
        const auto w = check_wasserstein_contraction(model, g0, g1, t);
        // Equal variances contract at exactly the curvature rate (heat: W2 is preserved).
        rows.push_back(make_check("wasserstein_t" + tag(t), w.lhs, w.rhs, 1e-10, CheckKind::identity));
    }

    if (model.potential() == Potential::zero) {
        for (double t : ts) {
            for (double s : ts) {
                const std::string at = fmt::format("t{}_s{}", tag(t), tag(s));
                for (std::size_t k = 0; k < fns.size(); ++k) {
                    rows.push_back(make_check(fmt::format("commutation_dimensional_{}_f{}", at, k),
                                              check_commutation_dimensional(model, fns[k], t, s), 0.0,
                                              1e-6 * (1.0 + fns[k].sup_norm()), CheckKind::inequality));
                }
                const auto c = check_entropic_contraction_dimensional(model, p.mu0, p.mu1, t, s, opts);
                rows.push_back(make_check("entropic_dimensional_" + at, c.lhs, c.rhs, 1e-4 * scale_of(c.rhs),
                                          CheckKind::inequality));
                const auto w = check_wasserstein_dimensional(model, g0, g1, t, s);
                rows.push_back(make_check("wasserstein_dimensional_" + at, w.lhs, w.rhs, 1e-10, CheckKind::inequality));
            }
        }
        const GaussianMeasure centred(0.0, 1.0);
        const auto w = check_wasserstein_dimensional(model, centred, centred, 1.0, 0.25);
        rows.push_back(make_check("wasserstein_dimensional_centred", w.lhs, w.rhs, 0.0, CheckKind::strict));
    }
    return rows;
}

// --- commands ---------------------------------------------------------------

int cmd_bridge(const ProblemConfig& config, const std::string& out_dir) {
    ensure_dir(out_dir);
    const Grid grid = config.grid();
    const auto heat = config.model(Potential::zero);
    const auto ou = config.model(Potential::quadratic);
    BridgeOptions opts;
    opts.ou_formula = config.ou_formula;

    const auto times = uniform_times(config.time_samples);
    std::vector<double> mm, mh, mo, vm, vh, vo;
    {
        CsvWriter csv(in_dir(out_dir, "moments.csv"),
                      {"t", "mean_mccann", "mean_heat", "mean_ou", "var_mccann", "var_heat", "var_ou"});
        for (double t : times) {
            const auto mc = mccann_interpolation(GaussianMeasure(config.x0, 1.0), GaussianMeasure(config.x1, 1.0), t);
            const auto h = bridge_moments(heat, config.x0, config.x1, t, opts);
            const auto o = bridge_moments(ou, config.x0, config.x1, t, opts);
            csv.row({t, mc.mean(), h.mean, o.mean, mc.variance(), h.variance, o.variance});
            mm.push_back(mc.mean());
            mh.push_back(h.mean);
            mo.push_back(o.mean);
            vm.push_back(mc.variance());
            vh.push_back(h.variance);
            vo.push_back(o.variance);
        }
    }

    std::vector<Panel> panels;
    for (double t : {0.0, 0.5, 1.0}) {
        const auto mc = mccann_interpolation(GaussianMeasure(config.x0, 1.0), GaussianMeasure(config.x1, 1.0), t);
        const auto dm = gaussian_grid_density(mc, grid);
        const auto dh = bridge_density(bridge_moments(heat, config.x0, config.x1, t, opts), grid);
        const auto dou = bridge_density(bridge_moments(ou, config.x0, config.x1, t, opts), grid);
        CsvWriter csv(in_dir(out_dir, "density_t" + tag(t) + ".csv"), {"x", "mccann", "heat", "ou"});
        for (std::size_t i = 0; i < grid.size(); ++i) csv.row({grid[i], dm[i], dh[i], dou[i]});
    }

    panels.push_back({"variance", {{"McCann", times, vm, Stroke::dotted},
                                   {"heat", times, vh, Stroke::dashed},
                                   {"Ornstein-Uhlenbeck", times, vo, Stroke::solid}}});
    panels.push_back({"mean", {{"McCann", times, mm, Stroke::dotted},
                               {"heat", times, mh, Stroke::dashed},
                               {"Ornstein-Uhlenbeck", times, mo, Stroke::solid}}});
    write_svg(in_dir(out_dir, "bridge.svg"), panels);
    return exit_ok;
}

int cmd_verify(const ProblemConfig& config, Suite suite, const std::string& out_dir) {
    ensure_dir(out_dir);
    std::vector<CheckRow> rows;
    auto add = [&](std::vector<CheckRow> more) { rows.insert(rows.end(), more.begin(), more.end()); };
    if (suite == Suite::duality || suite == Suite::all) add(duality_checks(config));
    if (suite == Suite::decomposition || suite == Suite::all) add(decomposition_checks(config));
    if (suite == Suite::contraction || suite == Suite::all) add(contraction_checks(config));

    {
        CsvWriter csv(in_dir(out_dir, "report.csv"), {"check", "lhs", "rhs", "slack", "tolerance", "pass"});
        for (const auto& r : rows) {
            csv.row(std::vector<std::string>{r.check, CsvWriter::number(r.lhs), CsvWriter::number(r.rhs),
                                             CsvWriter::number(r.slack), CsvWriter::number(r.tolerance),
                                             r.pass ? "pass" : "fail"});
        }
    }
    for (const auto& r : rows) {
        if (!r.pass) {
            std::cerr << fmt::format("check failed: {} (lhs {:.10g}, rhs {:.10g}, tolerance {:.3g})\n", r.check, r.lhs,
                                     r.rhs, r.tolerance);
            return exit_assertion;
        }
    }
    std::cerr << fmt::format("{} checks passed\n", rows.size());
    return exit_ok;
}

int cmd_limits(const ProblemConfig& config, const std::vector<double>& epsilons, const std::string& out_dir) {
    ensure_dir(out_dir);
    const Grid grid = config.grid();
    const auto mu0 = gaussian_grid_density(GaussianMeasure(config.x0, 1.0), grid);
    const auto mu1 = gaussian_grid_density(GaussianMeasure(config.x1, 1.0), grid);
    const double target = 0.5 * wasserstein2_gaussian(GaussianMeasure(config.x0, 1.0), GaussianMeasure(config.x1, 1.0));

    std::vector<double> costs, errors;
    bool failed = false;
    for (double eps : epsilons) {
        ProblemConfig c = config;
        c.epsilon = eps;
        double cost = std::nan("");
        try {
            cost = solve_schrodinger_system(c.model(), mu0, mu1, solver_options(c)).cost_scaled;
        } catch (const ConvergenceError& e) {
            std::cerr << fmt::format("eps = {}: {}\n", eps, e.what());
            failed = true;
        } catch (const TruncationError& e) {
            std::cerr << fmt::format("eps = {}: {}\n", eps, e.what());
            failed = true;
        }
        costs.push_back(cost);
        errors.push_back(std::abs(cost - target));
    }

    {
        CsvWriter csv(in_dir(out_dir, "limits.csv"), {"epsilon", "scaled_cost", "w2_half", "abs_error"});
        for (std::size_t k = 0; k < epsilons.size(); ++k) csv.row({epsilons[k], costs[k], target, errors[k]});
    }
    std::vector<double> targets(epsilons.size(), target);
    write_svg(in_dir(out_dir, "limits.svg"),
              {{"scaled entropic cost against epsilon",
                {{"eps A", epsilons, costs, Stroke::solid}, {"W2^2/2", epsilons, targets, Stroke::dashed}}},
               {"absolute error", {{"|eps A - W2^2/2|", epsilons, errors, Stroke::solid}}}});

    if (failed) return exit_nonconvergence;
    for (std::size_t k = 1; k < errors.size(); ++k) {
        if (!(errors[k] < errors[k - 1])) {
            std::cerr << fmt::format("error does not decrease between eps = {} and eps = {}\n", epsilons[k - 1],
                                     epsilons[k]);
            return exit_assertion;
        }
    }
    return exit_ok;
}

int run_guarded(const std::function<int()>& command) {
    try {
        return command();
    } catch (const ConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << '\n';
        return exit_nonconvergence;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_config;
    } catch (const MassDeficitError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_config;
    } catch (const TruncationError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_config;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_config;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_assertion;
    }
}

}  // namespace bridgekit::cli
