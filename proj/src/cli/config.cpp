#include "bridgekit/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

namespace bridgekit::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_real(const std::string& key, const std::string& value, std::size_t line) {
    double v = 0.0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ConfigError(fmt::format("line {}: {} expects a finite number, got '{}'", line, key, value), line);
    }
    return v;
}

std::size_t parse_count(const std::string& key, const std::string& value, std::size_t line) {
    // Accept 1e5 style counts as long as they are whole numbers.
    const double v = parse_real(key, value, line);
    if (v < 0.0 || v != std::floor(v) || v > 1e12) {
        throw ConfigError(fmt::format("line {}: {} expects a nonnegative integer, got '{}'", line, key, value), line);
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

KolmogorovModel ProblemConfig::model() const { return model(kernel); }

KolmogorovModel ProblemConfig::model(Potential potential) const {
    return potential == Potential::zero ? KolmogorovModel::heat(epsilon) : KolmogorovModel::ornstein_uhlenbeck(epsilon);
}

Grid ProblemConfig::grid() const {
    const double lo = grid_lo.value_or(std::min(x0, x1) - 8.0);
    const double hi = grid_hi.value_or(std::max(x0, x1) + 8.0);
    if (!(lo < hi)) throw ConfigError("grid_lo must be below grid_hi", 0);
    return Grid(lo, hi, grid_n);
}

ProblemConfig parse_config(std::istream& in) {
    ProblemConfig c;
    std::set<std::string> seen;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(fmt::format("line {}: expected key = value", line), line);
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (value.empty()) throw ConfigError(fmt::format("line {}: {} has no value", line, key), line);
        if (!seen.insert(key).second) throw ConfigError(fmt::format("line {}: {} set twice", line, key), line);

        if (key == "kernel") {
            if (value == "heat") c.kernel = Potential::zero;
            else if (value == "ou") c.kernel = Potential::quadratic;
            else throw ConfigError(fmt::format("line {}: kernel must be heat or ou, got '{}'", line, value), line);
        } else if (key == "epsilon") {
            c.epsilon = parse_real(key, value, line);
            if (c.epsilon <= 0.0) throw ConfigError(fmt::format("line {}: epsilon must be positive", line), line);
        } else if (key == "x0") {
            c.x0 = parse_real(key, value, line);
        } else if (key == "x1") {
            c.x1 = parse_real(key, value, line);
        } else if (key == "grid_lo") {
            c.grid_lo = parse_real(key, value, line);
        } else if (key == "grid_hi") {
            c.grid_hi = parse_real(key, value, line);
        } else if (key == "grid_n") {
            c.grid_n = parse_count(key, value, line);
            if (c.grid_n < 64) throw ConfigError(fmt::format("line {}: grid_n must be at least 64", line), line);
        } else if (key == "time_samples") {
            c.time_samples = parse_count(key, value, line);
            if (c.time_samples < 3) throw ConfigError(fmt::format("line {}: time_samples must be at least 3", line), line);
        } else if (key == "tol") {
            c.tol = parse_real(key, value, line);
            if (c.tol <= 0.0) throw ConfigError(fmt::format("line {}: tol must be positive", line), line);
        } else if (key == "maxiter") {
            c.maxiter = parse_count(key, value, line);
            if (c.maxiter == 0) throw ConfigError(fmt::format("line {}: maxiter must be positive", line), line);
        } else if (key == "ou_formula") {
            if (value == "exact") c.ou_formula = OuFormula::exact;
            else if (value == "published") c.ou_formula = OuFormula::published;
            else throw ConfigError(fmt::format("line {}: ou_formula must be exact or published", line), line);
        } else {
            throw ConfigError(fmt::format("line {}: unknown key '{}'", line, key), line);
        }
    }
    return c;
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path), 0);
    return parse_config(in);
}

}  // namespace bridgekit::cli
