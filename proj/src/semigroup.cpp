#include "bridgekit/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bridgekit/error.hpp"

namespace bridgekit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_epsilon(double eps) {
    if (!std::isfinite(eps) || eps <= 0.0) {
        throw InputError("KolmogorovModel: epsilon must be positive and finite");
    }
}

void require_time(double t) {
    if (!std::isfinite(t) || t < 0.0) {
        throw InputError("kernel time must be nonnegative and finite");
    }
}

}  // namespace

// --- KolmogorovModel --------------------------------------------------------

KolmogorovModel::KolmogorovModel(Potential potential, double epsilon) : potential_(potential), epsilon_(epsilon) {
    require_epsilon(epsilon);
}

KolmogorovModel KolmogorovModel::heat(double epsilon) { return KolmogorovModel(Potential::zero, epsilon); }

KolmogorovModel KolmogorovModel::ornstein_uhlenbeck(double epsilon) {
    return KolmogorovModel(Potential::quadratic, epsilon);
}

KolmogorovModel KolmogorovModel::with_epsilon(double epsilon) const { return KolmogorovModel(potential_, epsilon); }

ReferenceKind KolmogorovModel::reference_kind() const noexcept {
    return potential_ == Potential::zero ? ReferenceKind::lebesgue : ReferenceKind::standard_gaussian;
}

std::string KolmogorovModel::name() const { return potential_ == Potential::zero ? "heat" : "ou"; }

ReferenceMeasure KolmogorovModel::reference(const Grid& grid) const {
    return potential_ == Potential::zero ? ReferenceMeasure::lebesgue(grid) : ReferenceMeasure::standard_gaussian(grid);
}

double KolmogorovModel::potential_gradient(double x) const noexcept {
    return potential_ == Potential::zero ? 0.0 : x;
}

double KolmogorovModel::transition_mean(double x, double t) const {
    require_time(t);
    return potential_ == Potential::zero ? x : x * std::exp(-0.5 * epsilon_ * t);
}

double KolmogorovModel::transition_variance(double t) const {
    require_time(t);
    return potential_ == Potential::zero ? epsilon_ * t : -std::expm1(-epsilon_ * t);
}

// --- KernelMatrix -----------------------------------------------------------

KernelMatrix::KernelMatrix(KolmogorovModel model, Grid grid, double t) : model_(model), grid_(grid), t_(t) {
    const std::size_t n = grid_.size();
    log_weights_.resize(n);
    for (std::size_t j = 0; j < n; ++j) log_weights_[j] = std::log(grid_.weight(j));
    if (is_identity()) return;

    const double var = model_.transition_variance(t_);
    const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * var);
    entries_.resize(n * n);
    log_entries_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double mean = model_.transition_mean(grid_[i], t_);
        for (std::size_t j = 0; j < n; ++j) {
            const double d = grid_[j] - mean;
            const double lq = log_norm - 0.5 * d * d / var;
            log_entries_[i * n + j] = lq;
            entries_[i * n + j] = std::exp(lq);
        }
    }
}

double KernelMatrix::entry(std::size_t i, std::size_t j) const {
    if (is_identity()) throw InputError("KernelMatrix: the t = 0 kernel is a point mass");
    return entries_[i * grid_.size() + j];
}

double KernelMatrix::log_entry(std::size_t i, std::size_t j) const {
    if (is_identity()) throw InputError("KernelMatrix: the t = 0 kernel is a point mass");
    return log_entries_[i * grid_.size() + j];
}

std::span<const double> KernelMatrix::row(std::size_t i) const {
    if (is_identity()) throw InputError("KernelMatrix: the t = 0 kernel is a point mass");
    const std::size_t n = grid_.size();
    return std::span<const double>(entries_).subspan(i * n, n);
}

std::span<const double> KernelMatrix::log_row(std::size_t i) const {
    if (is_identity()) throw InputError("KernelMatrix: the t = 0 kernel is a point mass");
    const std::size_t n = grid_.size();
    return std::span<const double>(log_entries_).subspan(i * n, n);
}

double KernelMatrix::row_mass(std::size_t i) const {
    if (is_identity()) return 1.0;
    return trapezoid(grid_, row(i));
}

bool KernelMatrix::row_is_interior(std::size_t i) const {
    if (is_identity()) return true;
    const double mean = model_.transition_mean(grid_[i], t_);
    const double reach = support_sigmas * std::sqrt(model_.transition_variance(t_));
    return mean - reach >= grid_.lo() && mean + reach <= grid_.hi();
}

std::vector<bool> KernelMatrix::interior_rows() const {
    std::vector<bool> out(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) out[i] = row_is_interior(i);
    return out;
}

std::pair<std::size_t, std::size_t> KernelMatrix::row_support(std::size_t i) const {
    if (is_identity()) return {i, i};
    const double mean = model_.transition_mean(grid_[i], t_);
    const double reach = support_sigmas * std::sqrt(model_.transition_variance(t_));
    const double h = grid_.spacing();
    const double last_index = static_cast<double>(grid_.size() - 1);
    const double a = std::clamp(std::floor((mean - reach - grid_.lo()) / h), 0.0, last_index);
    const double b = std::clamp(std::ceil((mean + reach - grid_.lo()) / h), 0.0, last_index);
    return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

KernelMatrix build_kernel(const KolmogorovModel& model, double t, const Grid& grid) {
    require_time(t);
    KernelMatrix k(model, grid, t);
    if (k.is_identity()) return k;

    bool any_interior = false;
    std::size_t worst = 0;
    double worst_mass = 1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!k.row_is_interior(i)) continue;
        any_interior = true;
        const double m = k.row_mass(i);
        if (std::abs(m - 1.0) > std::abs(worst_mass - 1.0)) {
            worst = i;
            worst_mass = m;
        }
    }
    if (!any_interior) {
        // Report the central row, which is the best the grid can do.
        const std::size_t mid = grid.size() / 2;
        std::ostringstream os;
        os << "kernel at t = " << t << " is wider than the grid; central row captures mass " << k.row_mass(mid);
        throw TruncationError(os.str(), mid, k.row_mass(mid));
    }
    if (std::abs(worst_mass - 1.0) > KernelMatrix::mass_tolerance) {
        std::ostringstream os;
        os.precision(12);
        os << "kernel at t = " << t << " is not resolved by the grid spacing; row " << worst << " captures mass "
           << worst_mass;
        throw TruncationError(os.str(), worst, worst_mass);
    }
    return k;
}

GridFunction apply_semigroup(const KernelMatrix& kernel, const GridFunction& f) {
    if (!(f.grid() == kernel.grid())) {
        throw InputError("apply_semigroup: function and kernel live on different grids");
    }
    if (kernel.is_identity()) return f;
    const Grid& grid = kernel.grid();
    const std::size_t n = grid.size();
    std::vector<double> wf(n);
    for (std::size_t j = 0; j < n; ++j) wf[j] = grid.weight(j) * f[j];
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto q = kernel.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += q[j] * wf[j];
        out[i] = s;
    }
    return GridFunction(grid, std::move(out));
}

std::vector<double> log_apply_semigroup(const KernelMatrix& kernel, std::span<const double> log_f) {
    const Grid& grid = kernel.grid();
    const std::size_t n = grid.size();
    if (log_f.size() != n) {
        throw InputError("log_apply_semigroup: sample count does not match the grid");
    }
    if (kernel.is_identity()) return std::vector<double>(log_f.begin(), log_f.end());

    std::vector<double> a(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = std::log(grid.weight(j)) + log_f[j];
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto lq = kernel.log_row(i);
        double mx = kNegInf;
        for (std::size_t j = 0; j < n; ++j) mx = std::max(mx, lq[j] + a[j]);
        if (mx == kNegInf) {
            out[i] = kNegInf;
            continue;
        }
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += std::exp(lq[j] + a[j] - mx);
        out[i] = mx + std::log(s);
    }
    return out;
}

GridFunction entropic_hopf_lax(const KernelMatrix& kernel_u, const GridFunction& psi) {
    if (!(psi.grid() == kernel_u.grid())) {
        throw InputError("entropic_hopf_lax: potential and kernel live on different grids");
    }
    const double eps = kernel_u.model().epsilon();
    std::vector<double> scaled(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) scaled[i] = psi[i] / eps;
    auto out = log_apply_semigroup(kernel_u, scaled);
    for (double& v : out) v *= eps;
    return GridFunction(psi.grid(), std::move(out));
}

GridFunction entropic_hopf_lax(const KolmogorovModel& model, double u, const GridFunction& psi) {
    return entropic_hopf_lax(build_kernel(model, u, psi.grid()), psi);
}

std::vector<bool> propagate_validity(const KernelMatrix& kernel, const std::vector<bool>& valid) {
    const std::size_t n = kernel.grid().size();
    if (valid.size() != n) {
        throw InputError("propagate_validity: mask size does not match the grid");
    }
    std::vector<bool> out(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (!kernel.row_is_interior(i)) continue;
        const auto [a, b] = kernel.row_support(i);
        bool ok = true;
        for (std::size_t j = a; j <= b && ok; ++j) ok = valid[j];
        out[i] = ok;
    }
    return out;
}

}  // namespace bridgekit
