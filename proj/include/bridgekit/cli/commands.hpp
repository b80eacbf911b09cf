#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bridgekit/cli/config.hpp"

namespace bridgekit::cli {

enum ExitCode : int { exit_ok = 0, exit_assertion = 1, exit_config = 2, exit_nonconvergence = 3 };

enum class Suite { duality, decomposition, contraction, all };

Suite parse_suite(const std::string& name);

/// "1,0.5,0.2": positive and sorted descending.
std::vector<double> parse_epsilon_list(const std::string& text);

enum class CheckKind {
    identity,     // |lhs - rhs| <= tolerance
    inequality,   // lhs <= rhs + tolerance
    strict,       // lhs < rhs
};

struct CheckRow {
    std::string check;
    double lhs;
    double rhs;
    double slack;  // rhs - lhs
    double tolerance;
    bool pass;
};

CheckRow make_check(std::string name, double lhs, double rhs, double tolerance, CheckKind kind);

std::vector<CheckRow> duality_checks(const ProblemConfig& config);
std::vector<CheckRow> decomposition_checks(const ProblemConfig& config);
std::vector<CheckRow> contraction_checks(const ProblemConfig& config);

/// Bounded test functions for the commutation checks: capped quadratics,
/// trigonometric perturbations and a constant.
std::vector<GridFunction> commutation_test_functions(const Grid& grid);

/// moments.csv, density_t0.csv, density_t0.5.csv, density_t1.csv, bridge.svg.
int cmd_bridge(const ProblemConfig& config, const std::string& out_dir);

/// report.csv; exit_assertion naming the first failing check.
int cmd_verify(const ProblemConfig& config, Suite suite, const std::string& out_dir);

/// limits.csv and limits.svg; asserts the error column decreases strictly.
int cmd_limits(const ProblemConfig& config, const std::vector<double>& epsilons, const std::string& out_dir);

/// Runs a command, mapping library errors to exit codes with a message on stderr.
int run_guarded(const std::function<int()>& command);

}  // namespace bridgekit::cli
