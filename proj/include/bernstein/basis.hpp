#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "bernstein/expspace.hpp"
#include "bernstein/linalg.hpp"

namespace bernstein {

/// Which rank-revealing factorization extracts the collocation nullspace.
/// Two algorithmically independent routes let callers cross-check that the
/// basis is determined up to scale.
enum class KernelRoute { Svd, FullPivLu };

struct BasisBuildOptions {
    double rank_tol = 1e-10;       // relative singular-value cutoff for rank decisions
    double residual_warn = 1e-8;   // nullspace residual beyond which a warning is attached
    int soft_degree_cap = 12;      // warn above this degree
    int hard_degree_cap = 20;      // refuse above this degree
    KernelRoute route = KernelRoute::Svd;
};

/// Basis p_{n,0}, ..., p_{n,n} where p_{n,k} vanishes to order k at a and to
/// order n-k at b, scaled so the k-th derivative at a equals k!. Construction
/// goes through build_bernstein_basis; instances are immutable afterwards.
class BernsteinBasis {
public:
    BernsteinBasis(std::shared_ptr<const FunctionFamily> family, Interval iv,
                   std::vector<std::vector<double>> coeffs,
                   std::vector<double> lead_at_a, std::vector<std::string> warnings);

    [[nodiscard]] std::size_t degree() const { return coeffs_.size() - 1; }
    [[nodiscard]] std::size_t size() const { return coeffs_.size(); }
    [[nodiscard]] const FunctionFamily& family() const { return *family_; }
    [[nodiscard]] const std::shared_ptr<const FunctionFamily>& family_ptr() const {
        return family_;
    }
    [[nodiscard]] const Interval& interval() const { return iv_; }
    [[nodiscard]] const std::vector<double>& coeffs(std::size_t k) const;
    /// Achieved k-th derivative of p_{n,k} at a (k! unless rescaled).
    [[nodiscard]] const std::vector<double>& lead_at_a() const { return lead_at_a_; }
    [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }

    /// Evaluate the order-th derivative of p_{n,k} at x.
    [[nodiscard]] double eval(std::size_t k, double x, int order = 0) const;

    /// Copy with p_{n,k} multiplied by factors[k]; every factor must be > 0.
    [[nodiscard]] BernsteinBasis rescaled(const std::vector<double>& factors) const;

private:
    std::shared_ptr<const FunctionFamily> family_;
    Interval iv_;
    std::vector<std::vector<double>> coeffs_;
    std::vector<double> lead_at_a_;
    std::vector<std::string> warnings_;
};

struct ZeroOrderReport {
    bool ok = false;
    double worst_residual = 0.0;  // max residual over all endpoint conditions,
                                  // each normalized by its pre-cancellation
                                  // evaluation magnitude
};

struct NonNegEntry {
    bool global = false;   // non-negative on the whole sampled interval
    bool local_a = false;  // non-negative on the 5% window touching a
    bool local_b = false;  // non-negative on the 5% window touching b
    double min_value = 0.0;
    double argmin = 0.0;
};

struct NonNegReport {
    std::vector<NonNegEntry> entries;
    [[nodiscard]] bool all_global() const;
};

/// Endpoint collocation matrix whose nullspace defines p_{n,k}: the first k
/// rows are derivative orders 0..k-1 at a, the remaining n-k rows are orders
/// 0..n-k-1 at b; columns follow the family order. Size n x (n+1).
[[nodiscard]] MatrixRows collocation_matrix(const FunctionFamily& family, const Interval& iv,
                                            std::size_t k);

/// Solve all n+1 collocation nullspaces and normalize. Throws
/// NotChebyshevAtEndpoints when any nullspace is not one-dimensional or when a
/// basis function cannot achieve a nonzero leading endpoint derivative, and
/// PreconditionFailed above the hard degree cap.
[[nodiscard]] BernsteinBasis build_bernstein_basis(std::shared_ptr<const FunctionFamily> family,
                                                   const Interval& iv,
                                                   const BasisBuildOptions& opts = {});

/// Re-check every defining endpoint condition of the basis. Diagnostic only.
[[nodiscard]] ZeroOrderReport verify_zero_orders(const BernsteinBasis& basis);

/// Sample each basis function on a uniform grid plus endpoint-clustered
/// refinements and report global/local non-negativity. Requires
/// grid_points >= 50 * (n+1).
[[nodiscard]] NonNegReport verify_nonneg(const BernsteinBasis& basis, std::size_t grid_points);

}  // namespace bernstein
