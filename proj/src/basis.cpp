#include "bernstein/basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "bernstein/errors.hpp"

namespace bernstein {

namespace {

const double kPi = 3.14159265358979323846;

double factorial(std::size_t k) {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return f;
}

std::vector<double> derivative_row(const FunctionFamily& family, double x, int order) {
    std::vector<double> row(family.size());
    for (std::size_t j = 0; j < family.size(); ++j) row[j] = family.deriv(j, x, order);
    return row;
}

double row_norm(const std::vector<double>& row) {
    double s = 0.0;
    for (double v : row) s += v * v;
    return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double coeff_scale(const std::vector<double>& coeffs) {
    double m = 0.0;
    for (double c : coeffs) m = std::max(m, std::abs(c));
    return std::max(m, 1e-300);
}

}  // namespace

BernsteinBasis::BernsteinBasis(std::shared_ptr<const FunctionFamily> family, Interval iv,
                               std::vector<std::vector<double>> coeffs,
                               std::vector<double> lead_at_a,
                               std::vector<std::string> warnings)
    : family_(std::move(family)),
      iv_(iv),
      coeffs_(std::move(coeffs)),
      lead_at_a_(std::move(lead_at_a)),
      warnings_(std::move(warnings)) {
    if (!family_ || coeffs_.empty() || coeffs_.size() != family_->size() ||
        lead_at_a_.size() != coeffs_.size()) {
        throw PreconditionFailed("basis pieces are inconsistent with the function family");
    }
    for (const auto& c : coeffs_) {
        if (c.size() != family_->size()) {
            throw PreconditionFailed("basis coefficient vector has the wrong length");
        }
    }
}

const std::vector<double>& BernsteinBasis::coeffs(std::size_t k) const {
    if (k >= coeffs_.size()) throw OutOfRange("basis index out of range");
    return coeffs_[k];
}

double BernsteinBasis::eval(std::size_t k, double x, int order) const {
    if (k >= coeffs_.size()) throw OutOfRange("basis index out of range");
    double s = 0.0;
    for (std::size_t j = 0; j < coeffs_[k].size(); ++j) {
        s += coeffs_[k][j] * family_->deriv(j, x, order);
    }
    return s;
}

BernsteinBasis BernsteinBasis::rescaled(const std::vector<double>& factors) const {
    if (factors.size() != coeffs_.size()) {
        throw PreconditionFailed("need one scale factor per basis function");
    }
    for (double f : factors) {
        if (!(f > 0.0)) throw PreconditionFailed("rescaling factors must be positive");
    }
    auto coeffs = coeffs_;
    auto lead = lead_at_a_;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        for (double& c : coeffs[k]) c *= factors[k];
        lead[k] *= factors[k];
    }
    return {family_, iv_, std::move(coeffs), std::move(lead), warnings_};
}

MatrixRows collocation_matrix(const FunctionFamily& family, const Interval& iv, std::size_t k) {
    const std::size_t n = family.size() - 1;
    if (k > n) throw PreconditionFailed("basis index exceeds the degree");
    MatrixRows rows;
    rows.reserve(n);
    for (std::size_t j = 0; j < k; ++j) {
        rows.push_back(derivative_row(family, iv.a, static_cast<int>(j)));
    }
    for (std::size_t j = 0; j + k < n; ++j) {
        rows.push_back(derivative_row(family, iv.b, static_cast<int>(j)));
    }
    return rows;
}

BernsteinBasis build_bernstein_basis(std::shared_ptr<const FunctionFamily> family,
                                     const Interval& iv, const BasisBuildOptions& opts) {
    if (!family || family->size() == 0) {
        throw PreconditionFailed("basis construction needs a non-empty function family");
    }
    const std::size_t n = family->size() - 1;
    if (n > static_cast<std::size_t>(opts.hard_degree_cap)) {
        throw PreconditionFailed("degree " + std::to_string(n) +
                                 " is beyond what double precision supports here (cap " +
                                 std::to_string(opts.hard_degree_cap) + ")");
    }
    std::vector<std::string> warnings;
    if (n > static_cast<std::size_t>(opts.soft_degree_cap)) {
        warnings.push_back("degree " + std::to_string(n) +
                           " is above the well-conditioned range; expect reduced accuracy");
    }

    std::vector<std::vector<double>> coeffs(n + 1);
    std::vector<double> lead(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const MatrixRows rows = collocation_matrix(*family, iv, k);
        const KernelResult kernel = opts.route == KernelRoute::Svd
                                        ? svd_kernel(rows, opts.rank_tol)
                                        : lu_kernel(rows, opts.rank_tol);
        if (kernel.vector.empty() || !kernel.unique) {
            throw NotChebyshevAtEndpoints(
                "endpoint collocation conditions do not determine basis function " +
                std::to_string(k) + " up to scale");
        }
        if (kernel.residual > opts.residual_warn) {
            warnings.push_back("basis function " + std::to_string(k) +
                               ": ill-conditioned nullspace solve, residual " +
                               std::to_string(kernel.residual));
        }

        const auto row_a = derivative_row(*family, iv.a, static_cast<int>(k));
        const auto row_b = derivative_row(*family, iv.b, static_cast<int>(n - k));
        const double lead_a = dot(row_a, kernel.vector);
        const double lead_b = dot(row_b, kernel.vector);
        if (std::abs(lead_a) < opts.rank_tol * row_norm(row_a) ||
            std::abs(lead_b) < opts.rank_tol * row_norm(row_b)) {
            throw NotChebyshevAtEndpoints(
                "basis function " + std::to_string(k) +
                " degenerates at an endpoint (leading derivative vanishes)");
        }

        const double factor = factorial(k) / lead_a;
        coeffs[k] = kernel.vector;
        for (double& c : coeffs[k]) c *= factor;
        lead[k] = factorial(k);
    }
    return {std::move(family), iv, std::move(coeffs), std::move(lead), std::move(warnings)};
}

namespace {

// Attainable size of the evaluation Sum_m c_m phi_m^(order)(x) given
// coefficients of this magnitude. Dividing a residual by this measures it
// against what the sum could have produced, so the metric stays meaningful at
// high degrees where the raw derivative terms are huge.
double term_magnitude(const BernsteinBasis& basis, std::size_t k, double x, int order) {
    const FunctionFamily& family = basis.family();
    double m = 0.0;
    for (std::size_t j = 0; j < family.size(); ++j) {
        m += std::abs(family.deriv(j, x, order));
    }
    return std::max(coeff_scale(basis.coeffs(k)) * m, 1e-300);
}

}  // namespace

ZeroOrderReport verify_zero_orders(const BernsteinBasis& basis) {
    const std::size_t n = basis.degree();
    const Interval& iv = basis.interval();
    ZeroOrderReport report;
    report.ok = true;
    for (std::size_t k = 0; k <= n; ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            const double r = std::abs(basis.eval(k, iv.a, static_cast<int>(j))) /
                             term_magnitude(basis, k, iv.a, static_cast<int>(j));
            report.worst_residual = std::max(report.worst_residual, r);
        }
        for (std::size_t j = 0; j + k < n; ++j) {
            const double r = std::abs(basis.eval(k, iv.b, static_cast<int>(j))) /
                             term_magnitude(basis, k, iv.b, static_cast<int>(j));
            report.worst_residual = std::max(report.worst_residual, r);
        }
        const double lead = basis.lead_at_a()[k];
        const double lead_r = std::abs(basis.eval(k, iv.a, static_cast<int>(k)) - lead) /
                              std::max(term_magnitude(basis, k, iv.a, static_cast<int>(k)),
                                       std::abs(lead));
        report.worst_residual = std::max(report.worst_residual, lead_r);
        // the opposite endpoint derivative must be genuinely nonzero
        if (std::abs(basis.eval(k, iv.b, static_cast<int>(n - k))) <=
            1e-8 * term_magnitude(basis, k, iv.b, static_cast<int>(n - k))) {
            report.ok = false;
        }
    }
    if (report.worst_residual > 1e-8) report.ok = false;
    return report;
}

bool NonNegReport::all_global() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const NonNegEntry& e) { return e.global; });
}

NonNegReport verify_nonneg(const BernsteinBasis& basis, std::size_t grid_points) {
    const std::size_t n = basis.degree();
    if (grid_points < 50 * (n + 1)) {
        throw PreconditionFailed("non-negativity audit needs at least 50 points per function");
    }
    const Interval& iv = basis.interval();
    const double window = 0.05 * iv.length();

    // Uniform samples plus Chebyshev-clustered points inside each 5% endpoint
    // window, where the defining zeros make sign changes hardest to see.
    std::vector<double> xs;
    xs.reserve(grid_points + 130);
    for (std::size_t i = 0; i < grid_points; ++i) {
        xs.push_back(iv.a + iv.length() * static_cast<double>(i) /
                                static_cast<double>(grid_points - 1));
    }
    const std::size_t refine = 64;
    for (std::size_t i = 0; i <= refine; ++i) {
        const double t = 1.0 - std::cos(0.5 * kPi * static_cast<double>(i) /
                                        static_cast<double>(refine));
        xs.push_back(iv.a + window * t);
        xs.push_back(iv.b - window * t);
    }

    NonNegReport report;
    report.entries.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        NonNegEntry& entry = report.entries[k];
        double max_abs = 0.0;
        std::vector<double> values(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            values[i] = basis.eval(k, xs[i]);
            max_abs = std::max(max_abs, std::abs(values[i]));
        }
        const double tol = -1e-12 * std::max(max_abs, 1e-300);
        entry.global = true;
        entry.local_a = true;
        entry.local_b = true;
        entry.min_value = values[0];
        entry.argmin = xs[0];
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (values[i] < entry.min_value) {
                entry.min_value = values[i];
                entry.argmin = xs[i];
            }
            if (values[i] >= tol) continue;
            entry.global = false;
            if (xs[i] <= iv.a + window) entry.local_a = false;
            if (xs[i] >= iv.b - window) entry.local_b = false;
        }
    }
    return report;
}

}  // namespace bernstein
