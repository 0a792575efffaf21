#pragma once

#include <memory>
#include <vector>

#include "bernstein/basis.hpp"
#include "bernstein/chain.hpp"
#include "bernstein/expspace.hpp"

namespace bernstein {

/// The five-dimensional space <1, x, x^2, cos x, sin x>.
[[nodiscard]] std::shared_ptr<const Space> u4_space();

/// The three-dimensional space <1, cos x, sin x>.
[[nodiscard]] std::shared_ptr<const Space> trig1_space();

/// Closed-form Bernstein basis p_{4,0},...,p_{4,4} of u4_space() on [0, b],
/// as coefficient vectors over (1, x, x^2, cos x, sin x); the reflections
/// p_{4,0}(x) = p_{4,4}(b-x) and p_{4,1}(x) = p_{4,3}(b-x) are expanded into
/// the same representation. These closed forms are not normalized by k-th
/// derivatives at 0, so comparisons against build_bernstein_basis output are
/// up to per-function scalars. Throws OutOfRange unless 0 < b < 2*pi.
[[nodiscard]] std::vector<SpaceElement> u4_closed_form(double b);

/// Closed-form Bernstein basis p_{2,0}, p_{2,1}, p_{2,2} of trig1_space() on
/// [0, b]. Throws OutOfRange when 1 - cos b vanishes numerically (at b near
/// even multiples of pi no such basis exists).
[[nodiscard]] std::vector<SpaceElement> example1_closed_form(double b);

/// h(b) = f1''(b) p'_{4,3}(b) - f1'(b) p''_{4,3}(b) for f0 = 1 and
/// f1 = 1 + x - cos x on [0, b], via the expanded trigonometric form.
/// A negative value pushes the k = 2 expansion ratio past its upper bound,
/// so no positive-weight operator fixing (f0, f1) exists on [0, b].
[[nodiscard]] double h_criterion(double b);

/// The same quantity evaluated through derivatives of the closed-form
/// p_{4,3}; independent of h_criterion's expansion and used to audit it.
[[nodiscard]] double h_criterion_from_basis(double b);

/// Left-hand side of the endpoint feasibility criterion
///   [f0(b) f1''(b) - f0''(b) f1(b)] p'_{n,n-1}(b)
///     - [f0(b) f1'(b) - f0'(b) f1(b)] p''_{n,n-1}(b).
/// For a locally non-negative basis with positive leading expansion
/// coefficients of f0, a non-negative value is equivalent to the k = n-2
/// upper ratio bound gamma_{n-2}/beta_{n-2} <= gamma_n/beta_n. Throws
/// PreconditionFailed when the degree is below 2, when f0 or f1 lives in a
/// different family than the basis, or when f0(b) <= 0.
[[nodiscard]] double crit_inequality(const BernsteinBasis& p_basis, const SpaceElement& f0,
                                     const SpaceElement& f1, double b);

/// One sample of counterexample_scan.
struct ScanRow {
    double b = 0.0;
    double h = 0.0;      // h_criterion(b)
    bool feasible = false;
    double t2 = 0.0;     // solution of f1(t) = gamma_2/beta_2 on [0, b+4], NaN if unbracketed
    double w_min = 0.0;  // smallest coefficient of (f1/f0)' in the derived basis, NaN on failure
    WClassification w_class = WClassification::SomeNegative;  // meaningful when w_min is finite
};

/// Scan of the family f0 = 1, f1 = 1 + x - cos x over right endpoints b.
struct CounterexampleScan {
    std::vector<ScanRow> rows;
    bool consistent = false;  // no row combines h < 0 with a feasible build
};

/// Evaluate steps samples of b, evenly spaced over [b_min, b_max] including
/// both ends (steps = 1 uses b_min alone). Per-b construction failures are
/// recorded as infeasible rows rather than thrown. The overshoot node t2 is
/// found by bisection on the extended bracket [0, b+4]; f1 = 1 + x - cos x
/// increases globally, so a root beyond b is still meaningful diagnostics.
/// Throws PreconditionFailed unless 0 < b_min <= b_max < 2*pi and steps >= 1.
[[nodiscard]] CounterexampleScan counterexample_scan(double b_min, double b_max, int steps);

}  // namespace bernstein
