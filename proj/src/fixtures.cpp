#include "bernstein/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "bernstein/errors.hpp"
#include "bernstein/operator.hpp"

namespace bernstein {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Coefficients of x -> f(b - x) over (1, x, x^2, cos x, sin x), given those
/// of f. The quadratic part shifts and flips; the trigonometric part turns
/// through the angle sum formulas cos(b-x) = cos b cos x + sin b sin x and
/// sin(b-x) = sin b cos x - cos b sin x.
std::vector<double> reflect_about(const std::vector<double>& c, double b) {
    const double cb = std::cos(b);
    const double sb = std::sin(b);
    return {c[0] + c[1] * b + c[2] * b * b,
            -(c[1] + 2.0 * c[2] * b),
            c[2],
            c[3] * cb + c[4] * sb,
            c[3] * sb - c[4] * cb};
}

/// Bisect f1(t) = target on [lo, hi] for nondecreasing f1. Returns NaN when
/// the target is not bracketed.
double invert_increasing(const SpaceElement& f1, double target, double lo, double hi) {
    const double flo = f1(lo);
    const double fhi = f1(hi);
    if (!(target >= flo) || !(target <= fhi)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double tol = 1e-13 * (std::abs(flo) + std::abs(fhi));
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f1(mid);
        if (std::abs(fm - target) < tol) {
            return mid;
        }
        if (fm < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::shared_ptr<const Space> u4_space() {
    // One shared instance so elements built here pass the pointer-identity
    // space checks in build_operator and derived_space.
    static const std::shared_ptr<const Space> space = Space::make(Spectrum({
        {0.0, 0.0, 3},
        {0.0, 1.0, 1},
        {0.0, -1.0, 1},
    }));
    return space;
}

std::shared_ptr<const Space> trig1_space() {
    static const std::shared_ptr<const Space> space = Space::make(Spectrum({
        {0.0, 0.0, 1},
        {0.0, 1.0, 1},
        {0.0, -1.0, 1},
    }));
    return space;
}

std::vector<SpaceElement> u4_closed_form(double b) {
    if (!(b > 0.0) || !(b < kTwoPi)) {
        throw OutOfRange("u4_closed_form: b = " + std::to_string(b) +
                         " outside (0, 2*pi)");
    }
    const auto space = u4_space();
    const double sb = std::sin(b);
    const double cb = std::cos(b);

    // p_{4,4} = cos x - 1 + x^2/2 vanishes to order 4 at 0; p_{4,3} combines
    // it with x - sin x to add a zero at b; p_{4,2} is the middle function
    // with double zeros at both ends.
    const double A = sb - b;
    const double B = cb - 1.0 + 0.5 * b * b;
    // The constant-term-1 normalization of p_{4,2} divides by
    // b(1 + cos b) - 2 sin b, which vanishes only at b = pi on (0, 2*pi)
    // while the numerator stays at -4: the printed form has no value there.
    const double a2_den = b + b * cb - 2.0 * sb;
    if (std::abs(a2_den) < 1e-9) {
        throw OutOfRange("u4_closed_form: p_{4,2} normalization degenerates at b = pi");
    }
    const double A2 = (2.0 * cb - 2.0 + b * sb) / a2_den;
    const double C2 = (sb + A2 * (1.0 - cb)) / (2.0 * b);

    const std::vector<double> p44 = {-1.0, 0.0, 0.5, 1.0, 0.0};
    const std::vector<double> p43 = {-A, B, 0.5 * A, A, -B};
    const std::vector<double> p42 = {1.0, A2, -C2, -1.0, -A2};

    return {SpaceElement(space, reflect_about(p44, b)),
            SpaceElement(space, reflect_about(p43, b)),
            SpaceElement(space, p42),
            SpaceElement(space, p43),
            SpaceElement(space, p44)};
}

std::vector<SpaceElement> example1_closed_form(double b) {
    const double cb = std::cos(b);
    const double sb = std::sin(b);
    if (std::abs(1.0 - cb) < 1e-12) {
        throw OutOfRange("example1_closed_form: no Bernstein basis at b = " +
                         std::to_string(b) + ", 1 - cos b vanishes");
    }
    const auto space = trig1_space();
    const double s = sb / (1.0 - cb);
    return {SpaceElement(space, {1.0, -cb, -sb}),
            SpaceElement(space, {-s, s, 1.0}),
            SpaceElement(space, {1.0, -1.0, 0.0})};
}

double h_criterion(double b) {
    const double s = std::sin(b);
    const double c = std::cos(b);
    return b * s * c - 0.5 * b * b * c + 2.0 * c * c - 2.0 * c + b - b * c -
           0.5 * b * b * s + b * s - 0.5 * b * b;
}

double h_criterion_from_basis(double b) {
    const std::vector<SpaceElement> p = u4_closed_form(b);
    // f1 = 1 + x - cos x, so f1'(b) = 1 + sin b and f1''(b) = cos b.
    return std::cos(b) * p[3].deriv(b, 1) - (1.0 + std::sin(b)) * p[3].deriv(b, 2);
}

double crit_inequality(const BernsteinBasis& p_basis, const SpaceElement& f0,
                       const SpaceElement& f1, double b) {
    const std::size_t n = p_basis.degree();
    if (n < 2) {
        throw PreconditionFailed("crit_inequality: basis degree must be at least 2");
    }
    if (f0.space().get() != p_basis.family_ptr().get() ||
        f1.space().get() != p_basis.family_ptr().get()) {
        throw PreconditionFailed(
            "crit_inequality: f0 and f1 must live in the basis family");
    }
    const double f0b = f0(b);
    if (!(f0b > 0.0)) {
        throw PreconditionFailed("crit_inequality: f0 must be positive at b");
    }
    const double second = f0b * f1.deriv(b, 2) - f0.deriv(b, 2) * f1(b);
    const double first = f0b * f1.deriv(b, 1) - f0.deriv(b, 1) * f1(b);
    return second * p_basis.eval(n - 1, b, 1) - first * p_basis.eval(n - 1, b, 2);
}

CounterexampleScan counterexample_scan(double b_min, double b_max, int steps) {
    if (!(b_min > 0.0) || !(b_max < kTwoPi) || !(b_min <= b_max)) {
        throw PreconditionFailed(
            "counterexample_scan: range must satisfy 0 < b_min <= b_max < 2*pi");
    }
    if (steps < 1) {
        throw PreconditionFailed("counterexample_scan: steps must be at least 1");
    }

    const auto space = u4_space();
    const SpaceElement f0(space, {1.0, 0.0, 0.0, 0.0, 0.0});
    const SpaceElement f1(space, {1.0, 1.0, 0.0, -1.0, 0.0});

    CounterexampleScan scan;
    scan.consistent = true;
    scan.rows.reserve(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        const double b =
            steps == 1 ? b_min : b_min + (b_max - b_min) * i / static_cast<double>(steps - 1);
        ScanRow row;
        row.b = b;
        row.h = h_criterion(b);
        row.t2 = std::numeric_limits<double>::quiet_NaN();
        row.w_min = std::numeric_limits<double>::quiet_NaN();
        try {
            const Interval iv(0.0, b);
            const ChainData data = compute_chain_data(space, iv, f0, f1);
            if (!data.w.empty()) {
                row.w_min = *std::min_element(data.w.begin(), data.w.end());
                row.w_class = sufficiency_check(data.w);
            }
            // The ratio f1/f0 here is 1 + x - cos x >= x, so a bracket end of
            // target + 2 always clears the target even when the overshoot is
            // far beyond b.
            const double target = data.gamma[2] / data.beta[2];
            row.t2 = invert_increasing(f1, target, 0.0, std::max(b + 4.0, target + 2.0));
            const BernsteinOperator op = build_operator(space, iv, f0, f1);
            (void)op;
            row.feasible = true;
        } catch (const Error&) {
            row.feasible = false;
        }
        if (row.h < 0.0 && row.feasible) {
            scan.consistent = false;
        }
        scan.rows.push_back(row);
    }
    return scan;
}

}  // namespace bernstein
