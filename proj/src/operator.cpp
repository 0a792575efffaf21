#include "bernstein/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "bernstein/linalg.hpp"

namespace bernstein {

namespace {

const double kPi = 3.14159265358979323846;

std::string violation_text(const FeasibilityReport& report) {
    std::string msg = "operator infeasible:";
    if (!report.beta_positive) msg += " some beta coefficient is not positive;";
    for (const auto& v : report.violations) {
        msg += " ratio[" + std::to_string(v.k) + "] = " + std::to_string(v.ratio) +
               (v.above ? " exceeds upper bound " + std::to_string(report.upper)
                        : " is below lower bound " + std::to_string(report.lower)) +
               ";";
    }
    return msg;
}

double eval_ratio(const SpaceElement& f1, const SpaceElement& f0, double x) {
    const double denom = f0(x);
    if (std::abs(denom) < 1e-300) {
        throw DivisionByZero("f0 vanishes at x = " + std::to_string(x));
    }
    return f1(x) / denom;
}

std::vector<double> chebyshev_lobatto(const Interval& iv, std::size_t count) {
    std::vector<double> xs(count);
    if (count == 1) {
        xs[0] = iv.a;
        return xs;
    }
    const double mid = 0.5 * (iv.a + iv.b);
    const double half = 0.5 * iv.length();
    const std::size_t n = count - 1;
    for (std::size_t i = 0; i <= n; ++i) {
        xs[i] = mid + half * std::cos(kPi * static_cast<double>(n - i) /
                                      static_cast<double>(n));
    }
    xs.front() = iv.a;
    xs.back() = iv.b;
    return xs;
}

double audit_residual(const std::vector<double>& coeffs, const BernsteinBasis& basis,
                      const SmoothFn& f) {
    const Interval& iv = basis.interval();
    const std::size_t points = 10 * basis.size();
    double sup_f = 0.0;
    double sup_err = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double x =
            iv.a + iv.length() * static_cast<double>(i) / static_cast<double>(points - 1);
        const double fx = f(x, 0);
        double recon = 0.0;
        for (std::size_t k = 0; k < coeffs.size(); ++k) recon += coeffs[k] * basis.eval(k, x);
        sup_f = std::max(sup_f, std::abs(fx));
        sup_err = std::max(sup_err, std::abs(recon - fx));
    }
    return sup_err / std::max(sup_f, 1e-300);
}

}  // namespace

Infeasible::Infeasible(FeasibilityReport report)
    : Error(violation_text(report)), report_(std::move(report)) {}

Expansion expand_smooth(const SmoothFn& f, const BernsteinBasis& basis,
                        const OperatorOptions& opts) {
    const std::size_t m = basis.size();

    // Primary route: collocation at Chebyshev points (endpoints included).
    const std::vector<double> xs = chebyshev_lobatto(basis.interval(), m);
    MatrixRows system(m, std::vector<double>(m));
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) system[i][k] = basis.eval(k, xs[i]);
        rhs[i] = f(xs[i], 0);
    }
    double primary_residual = std::numeric_limits<double>::infinity();
    std::vector<double> primary = solve_dense(system, rhs);
    if (!primary.empty()) {
        primary_residual = audit_residual(primary, basis, f);
        if (primary_residual <= opts.expansion_tol) {
            return {std::move(primary), primary_residual, false};
        }
    }

    // Fallback: match derivatives at a. The zero orders make this triangular,
    // with the k-th diagonal entry the (nonzero) leading derivative of p_{n,k}.
    const double a = basis.interval().a;
    std::vector<double> fallback(m);
    for (std::size_t j = 0; j < m; ++j) {
        double acc = f(a, static_cast<int>(j));
        for (std::size_t k = 0; k < j; ++k) {
            acc -= fallback[k] * basis.eval(k, a, static_cast<int>(j));
        }
        fallback[j] = acc / basis.eval(j, a, static_cast<int>(j));
    }
    const double fallback_residual = audit_residual(fallback, basis, f);
    if (fallback_residual <= opts.expansion_tol) {
        return {std::move(fallback), fallback_residual, true};
    }
    throw SingularExpansion("expansion failed both collocation (residual " +
                            std::to_string(primary_residual) +
                            ") and endpoint matching (residual " +
                            std::to_string(fallback_residual) + ")");
}

std::vector<double> expand_in_basis(const SpaceElement& f, const BernsteinBasis& basis,
                                    const OperatorOptions& opts) {
    const SmoothFn fn = [&f](double x, int order) { return f.deriv(x, order); };
    return expand_smooth(fn, basis, opts).coeffs;
}

FeasibilityReport ratio_check(const ExpansionCoeffs& coeffs, const SpaceElement& f0,
                              const SpaceElement& f1, const Interval& iv,
                              const OperatorOptions& opts) {
    const std::size_t m = coeffs.beta.size();
    if (m < 2 || coeffs.gamma.size() != m) {
        throw PreconditionFailed("expansion coefficient vectors are inconsistent");
    }

    // Audit the standing assumptions: f0 positive, f1/f0 strictly increasing.
    for (std::size_t i = 0; i < opts.audit_grid; ++i) {
        const double x = iv.a + iv.length() * static_cast<double>(i) /
                                    static_cast<double>(opts.audit_grid - 1);
        if (!(f0(x) > 0.0)) {
            throw PreconditionFailed("f0 must be positive on [a, b]; found f0(" +
                                     std::to_string(x) + ") = " + std::to_string(f0(x)));
        }
        if (!(quotient_deriv(f1, f0, x, 1) > 0.0)) {
            throw PreconditionFailed("f1/f0 must be strictly increasing on [a, b]; derivative "
                                     "is not positive at x = " +
                                     std::to_string(x));
        }
    }

    FeasibilityReport report;
    report.beta_positive = true;
    report.ratios.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (!(coeffs.beta[k] > 0.0)) report.beta_positive = false;
        report.ratios[k] = coeffs.gamma[k] / coeffs.beta[k];
    }
    report.lower = report.ratios.front();
    report.upper = report.ratios.back();

    // The first and last ratios must reproduce the endpoint values of f1/f0.
    const double ha = eval_ratio(f1, f0, iv.a);
    const double hb = eval_ratio(f1, f0, iv.b);
    const double h_scale = std::max({1.0, std::abs(ha), std::abs(hb)});
    report.endpoint_mismatch_a = std::abs(report.lower - ha);
    report.endpoint_mismatch_b = std::abs(report.upper - hb);
    if (report.endpoint_mismatch_a > opts.endpoint_identity_tol * h_scale ||
        report.endpoint_mismatch_b > opts.endpoint_identity_tol * h_scale) {
        throw PreconditionFailed(
            "expansion is inconsistent with the endpoint values of f1/f0");
    }

    const double slack = opts.clamp_tol * std::max({1.0, std::abs(report.lower),
                                                    std::abs(report.upper)});
    for (std::size_t k = 1; k + 1 < m; ++k) {
        if (report.ratios[k] < report.lower - slack) {
            report.violations.push_back({k, report.ratios[k], false});
        } else if (report.ratios[k] > report.upper + slack) {
            report.violations.push_back({k, report.ratios[k], true});
        }
    }
    return report;
}

std::vector<double> solve_nodes(const ExpansionCoeffs& coeffs, const SpaceElement& f0,
                                const SpaceElement& f1, const Interval& iv,
                                const OperatorOptions& opts) {
    const std::size_t m = coeffs.beta.size();
    if (m < 2 || coeffs.gamma.size() != m) {
        throw PreconditionFailed("expansion coefficient vectors are inconsistent");
    }
    for (double b : coeffs.beta) {
        if (!(b > 0.0)) throw PreconditionFailed("node solving needs positive beta");
    }

    const double ha = eval_ratio(f1, f0, iv.a);
    const double hb = eval_ratio(f1, f0, iv.b);
    const double clamp_slack = opts.clamp_tol * std::max({1.0, std::abs(ha), std::abs(hb)});
    const double bisect_tol = opts.bisect_tol_factor * (std::abs(ha) + std::abs(hb));

    std::vector<double> nodes(m);
    nodes.front() = iv.a;
    nodes.back() = iv.b;
    for (std::size_t k = 1; k + 1 < m; ++k) {
        double target = coeffs.gamma[k] / coeffs.beta[k];
        if (target < ha || target > hb) {
            if (target >= ha - clamp_slack && target <= ha) {
                nodes[k] = iv.a;
                continue;
            }
            if (target <= hb + clamp_slack && target >= hb) {
                nodes[k] = iv.b;
                continue;
            }
            throw RatioOutOfRange(k, target,
                                  "ratio " + std::to_string(target) + " at index " +
                                      std::to_string(k) + " escapes [" + std::to_string(ha) +
                                      ", " + std::to_string(hb) +
                                      "]; the node would leave [a, b]");
        }
        double lo = iv.a;
        double hi = iv.b;
        double mid = 0.5 * (lo + hi);
        for (int iter = 0; iter < opts.bisect_max_iter; ++iter) {
            mid = 0.5 * (lo + hi);
            const double h = eval_ratio(f1, f0, mid);
            if (std::abs(h - target) < bisect_tol) break;
            if (h < target) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        nodes[k] = mid;
    }
    return nodes;
}

BernsteinOperator build_operator(const BernsteinBasis& basis, const SpaceElement& f0,
                                 const SpaceElement& f1, const OperatorOptions& opts) {
    ExpansionCoeffs coeffs;
    coeffs.beta = expand_in_basis(f0, basis, opts);
    coeffs.gamma = expand_in_basis(f1, basis, opts);

    FeasibilityReport report = ratio_check(coeffs, f0, f1, basis.interval(), opts);
    if (!report.feasible()) throw Infeasible(std::move(report));

    std::vector<double> nodes = solve_nodes(coeffs, f0, f1, basis.interval(), opts);
    std::vector<double> weights(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        weights[k] = coeffs.beta[k] / f0(nodes[k]);
        if (!(weights[k] > 0.0)) {
            throw Error("internal inconsistency: weight " + std::to_string(k) +
                        " is not positive");
        }
    }
    return {basis, f0, f1, std::move(coeffs), std::move(report), std::move(nodes),
            std::move(weights)};
}

BernsteinOperator build_operator(std::shared_ptr<const Space> space, const Interval& iv,
                                 const SpaceElement& f0, const SpaceElement& f1,
                                 const OperatorOptions& opts) {
    if (!space || f0.space().get() != space.get() || f1.space().get() != space.get()) {
        throw PreconditionFailed("f0 and f1 must be elements of the given space");
    }
    const BernsteinBasis basis = build_bernstein_basis(space, iv, opts.basis);
    return build_operator(basis, f0, f1, opts);
}

double apply(const BernsteinOperator& op, const std::function<double(double)>& f, double x) {
    const Interval& iv = op.basis.interval();
    if (x < iv.a || x > iv.b) {
        throw OutOfRange("evaluation point " + std::to_string(x) + " is outside [a, b]");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < op.nodes.size(); ++k) {
        acc += f(op.nodes[k]) * op.weights[k] * op.basis.eval(k, x);
    }
    return acc;
}

ResidualReport residual_report(const BernsteinOperator& op, std::size_t grid_points,
                               std::uint64_t seed) {
    const Interval& iv = op.basis.interval();
    const std::size_t points = std::max<std::size_t>(grid_points, 2);
    ResidualReport report;

    double sup_f0 = 0.0, sup_f1 = 0.0, err_f0 = 0.0, err_f1 = 0.0;
    const auto f0_fn = [&op](double t) { return op.f0(t); };
    const auto f1_fn = [&op](double t) { return op.f1(t); };
    for (std::size_t i = 0; i < points; ++i) {
        const double x =
            iv.a + iv.length() * static_cast<double>(i) / static_cast<double>(points - 1);
        sup_f0 = std::max(sup_f0, std::abs(op.f0(x)));
        sup_f1 = std::max(sup_f1, std::abs(op.f1(x)));
        err_f0 = std::max(err_f0, std::abs(apply(op, f0_fn, x) - op.f0(x)));
        err_f1 = std::max(err_f1, std::abs(apply(op, f1_fn, x) - op.f1(x)));
    }
    report.f0_residual = err_f0 / std::max(1.0, sup_f0);
    report.f1_residual = err_f1 / std::max(1.0, sup_f1);

    // Positivity spot-check: B applied to max(0, random element) must stay
    // above -1e-10. Samples are normalized to O(1) coefficients.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto& space = *op.f0.space();
    report.positivity_ok = true;
    report.worst_value = 0.0;
    for (int sample = 0; sample < 8; ++sample) {
        std::vector<double> cs(space.size());
        double scale = 0.0;
        for (auto& c : cs) {
            c = gauss(rng);
            scale = std::max(scale, std::abs(c));
        }
        if (scale == 0.0) continue;
        for (auto& c : cs) c /= scale;
        const SpaceElement elem(op.f0.space(), cs);
        const auto clipped = [&elem](double t) { return std::max(0.0, elem(t)); };
        for (std::size_t i = 0; i < points; ++i) {
            const double x = iv.a + iv.length() * static_cast<double>(i) /
                                        static_cast<double>(points - 1);
            const double value = apply(op, clipped, x);
            report.worst_value = std::min(report.worst_value, value);
            if (value < -1e-10) report.positivity_ok = false;
        }
    }
    return report;
}

}  // namespace bernstein
