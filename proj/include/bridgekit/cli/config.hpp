#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>

#include "bridgekit/error.hpp"
#include "bridgekit/gaussian_bridge.hpp"
#include "bridgekit/measures.hpp"
#include "bridgekit/semigroup.hpp"

namespace bridgekit::cli {

/// Bad or unknown key in a config file; line is 0 when not tied to a line.
class ConfigError : public InputError {
public:
    ConfigError(const std::string& what, std::size_t line) : InputError(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct ProblemConfig {
    Potential kernel = Potential::zero;
    double epsilon = 1.0;
    double x0 = -3.0;
    double x1 = 3.0;
    std::optional<double> grid_lo;  // default min(x0, x1) - 8
    std::optional<double> grid_hi;  // default max(x0, x1) + 8
    std::size_t grid_n = 512;
    std::size_t time_samples = 41;
    double tol = 1e-9;
    std::size_t maxiter = 100000;
    OuFormula ou_formula = OuFormula::exact;

    KolmogorovModel model() const;
    KolmogorovModel model(Potential potential) const;
    Grid grid() const;
};

/// key = value lines, '#' starts a comment, blank lines ignored.
/// Keys: kernel (heat|ou), epsilon, x0, x1, grid_lo, grid_hi, grid_n (>= 64),
/// time_samples (>= 3), tol, maxiter, ou_formula (exact|published).
ProblemConfig parse_config(std::istream& in);
ProblemConfig load_config(const std::string& path);

}  // namespace bridgekit::cli
