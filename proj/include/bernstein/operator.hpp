#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "bernstein/basis.hpp"
#include "bernstein/errors.hpp"
#include "bernstein/expspace.hpp"

namespace bernstein {

/// Scalar function exposed through value and derivatives: f(x, m) is the m-th
/// derivative at x. Derivatives are only consulted by the endpoint-matching
/// expansion fallback.
using SmoothFn = std::function<double(double, int)>;

struct OperatorOptions {
    double expansion_tol = 1e-8;          // relative audit residual for expansions
    double endpoint_identity_tol = 1e-10; // gamma_0/beta_0 vs f1(a)/f0(a) and at b
    double clamp_tol = 1e-10;             // relative slack for ratios at the bounds
    double bisect_tol_factor = 1e-13;     // of |h(a)| + |h(b)|
    int bisect_max_iter = 200;
    std::size_t audit_grid = 1000;        // positivity/monotonicity audit points
    BasisBuildOptions basis;
};

struct ExpansionCoeffs {
    std::vector<double> beta;   // coefficients of f0
    std::vector<double> gamma;  // coefficients of f1
};

struct Expansion {
    std::vector<double> coeffs;
    double residual = 0.0;      // relative sup-norm deviation on the audit grid
    bool used_fallback = false; // endpoint-derivative matching instead of collocation
};

struct RatioViolation {
    std::size_t k = 0;
    double ratio = 0.0;
    bool above = false;  // true: beyond the upper bound, false: below the lower
};

/// Outcome of the sandwich test gamma_0/beta_0 <= gamma_k/beta_k <=
/// gamma_n/beta_n together with positivity of the beta coefficients.
struct FeasibilityReport {
    std::vector<double> ratios;           // gamma_k / beta_k
    double lower = 0.0;                   // gamma_0 / beta_0
    double upper = 0.0;                   // gamma_n / beta_n
    std::vector<RatioViolation> violations;
    bool beta_positive = false;
    double endpoint_mismatch_a = 0.0;     // |lower - f1(a)/f0(a)|
    double endpoint_mismatch_b = 0.0;     // |upper - f1(b)/f0(b)|
    [[nodiscard]] bool feasible() const { return beta_positive && violations.empty(); }
};

/// Raised when the sandwich condition fails; carries the full report.
class Infeasible : public Error {
public:
    explicit Infeasible(FeasibilityReport report);
    [[nodiscard]] const FeasibilityReport& report() const { return report_; }

private:
    FeasibilityReport report_;
};

/// B f = sum_k f(t_k) alpha_k p_{n,k}, reproducing f0 and f1.
struct BernsteinOperator {
    BernsteinBasis basis;
    SpaceElement f0;
    SpaceElement f1;
    ExpansionCoeffs coeffs;
    FeasibilityReport feasibility;
    std::vector<double> nodes;    // t_0 = a, ..., t_n = b
    std::vector<double> weights;  // alpha_k = beta_k / f0(t_k), all positive
};

struct ResidualReport {
    double f0_residual = 0.0;   // sup |B f0 - f0| / max(1, sup |f0|)
    double f1_residual = 0.0;
    bool positivity_ok = false; // B f >= -1e-10 for clipped random samples f
    double worst_value = 0.0;   // most negative B f value seen in that check
};

/// Coefficients of f in the basis: collocation at Chebyshev points, audited on
/// a 10(n+1)-point grid, with an endpoint-derivative triangular fallback.
/// Throws SingularExpansion when both strategies miss the audit tolerance.
[[nodiscard]] Expansion expand_smooth(const SmoothFn& f, const BernsteinBasis& basis,
                                      const OperatorOptions& opts = {});
[[nodiscard]] std::vector<double> expand_in_basis(const SpaceElement& f,
                                                  const BernsteinBasis& basis,
                                                  const OperatorOptions& opts = {});

/// Audit f0 > 0 and strict increase of f1/f0 on a grid (PreconditionFailed
/// otherwise), assert the endpoint ratio identities, and report the sandwich
/// test. Ratios within clamp_tol of a bound are not flagged; solve_nodes
/// clamps them the same way.
[[nodiscard]] FeasibilityReport ratio_check(const ExpansionCoeffs& coeffs,
                                            const SpaceElement& f0, const SpaceElement& f1,
                                            const Interval& iv,
                                            const OperatorOptions& opts = {});

/// Nodes t_k with f1(t_k)/f0(t_k) = gamma_k/beta_k. Endpoints are assigned
/// exactly; interior nodes come from bisection on the increasing ratio.
/// Throws RatioOutOfRange when a ratio escapes [h(a), h(b)] beyond clamp_tol.
[[nodiscard]] std::vector<double> solve_nodes(const ExpansionCoeffs& coeffs,
                                              const SpaceElement& f0, const SpaceElement& f1,
                                              const Interval& iv,
                                              const OperatorOptions& opts = {});

/// Full pipeline: basis, expansions, feasibility, nodes, weights.
/// Throws Infeasible (with the report) when the sandwich condition fails.
[[nodiscard]] BernsteinOperator build_operator(std::shared_ptr<const Space> space,
                                               const Interval& iv, const SpaceElement& f0,
                                               const SpaceElement& f1,
                                               const OperatorOptions& opts = {});

/// Same pipeline on an existing basis (e.g. a rescaled one).
[[nodiscard]] BernsteinOperator build_operator(const BernsteinBasis& basis,
                                               const SpaceElement& f0, const SpaceElement& f1,
                                               const OperatorOptions& opts = {});

/// Evaluate B f at x in [a, b].
[[nodiscard]] double apply(const BernsteinOperator& op,
                           const std::function<double(double)>& f, double x);

/// Reproduction residuals for f0 and f1 plus a positivity spot-check with
/// clipped random space elements (deterministic seed).
[[nodiscard]] ResidualReport residual_report(const BernsteinOperator& op,
                                             std::size_t grid_points,
                                             std::uint64_t seed = 20260818ULL);

}  // namespace bernstein
