#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "bernstein/basis.hpp"
#include "bernstein/expspace.hpp"
#include "bernstein/operator.hpp"

namespace bernstein {

/// How the derivative space {(f/f0)' : f in the parent space} is realized.
enum class DerivedRep { ShiftedSpectrum, QuotientFamily };

enum class WClassification { AllPositive, AllNonNegative, SomeNegative };

/// Generic realization of the derivative space: members u_i = (b_i/f0)' for a
/// pivoted selection of parent basis functions b_i, evaluated through the
/// quotient-derivative recurrence.
class QuotientFamily final : public FunctionFamily {
public:
    QuotientFamily(std::shared_ptr<const Space> parent, SpaceElement f0,
                   std::vector<std::size_t> members);

    [[nodiscard]] std::size_t size() const override { return members_.size(); }
    [[nodiscard]] double deriv(std::size_t i, double x, int order) const override;

    /// Indices of the parent basis functions backing each member.
    [[nodiscard]] const std::vector<std::size_t>& member_indices() const { return members_; }

private:
    std::shared_ptr<const Space> parent_;
    SpaceElement f0_;
    std::vector<SpaceElement> elems_;
    std::vector<std::size_t> members_;
};

/// The derivative space together with its Bernstein basis q_{n-1,k}
/// (normalized like the parent basis: q^{(k)}(a) = k!).
struct DerivedSpace {
    DerivedRep rep;
    std::shared_ptr<const Space> shifted;            // set iff rep is ShiftedSpectrum
    std::shared_ptr<const QuotientFamily> quotient;  // set iff rep is QuotientFamily
    BernsteinBasis q_basis;
};

/// Endpoint constants linking the two bases: (p_{n,k}/f0)' =
/// c_k q_{n-1,k-1} + d_k q_{n-1,k}. c holds c_1..c_n, d holds d_0..d_{n-1}.
struct EndpointConstants {
    std::vector<double> c;
    std::vector<double> d;
};

/// delta_k = gamma_k - (f1(a)/f0(a)) beta_k and Delta_k with b in place of a:
/// the expansion coefficients of f1 minus its endpoint-matched multiple of f0.
struct ProofDeltas {
    std::vector<double> delta;
    std::vector<double> Delta;
};

/// Everything the diagnostics JSON carries.
struct ChainData {
    std::vector<double> c;
    std::vector<double> d;
    std::vector<double> w;
    std::vector<double> delta;
    std::vector<double> Delta;
    std::vector<double> beta;
    std::vector<double> gamma;
};

/// Consistency audit over a ChainData (see verify_chain).
struct ChainCheck {
    double recursion_residual = 0.0;  // c_{k+1} delta_{k+1} = w_k - delta_k d_k
    bool endpoints_zero = false;      // delta_0 = 0 and Delta_n = 0
    bool c_positive = false;
    bool d_negative = false;
    WClassification w_class = WClassification::SomeNegative;
    bool delta_bounds_ok = false;     // delta >= 0 and Delta <= 0 when no w_k < 0
    bool ok = false;
};

/// Spectrum of the derivative space when f0 = c e^{lambda0 x}: every
/// eigenvalue moves by -lambda0 and the multiplicity at lambda0 drops by one.
/// Throws NotInSpectrum when lambda0 is not a real eigenvalue. The parent
/// must have dimension at least 3 so the result is a valid spectrum.
[[nodiscard]] Spectrum shift_spectrum(const Spectrum& spec, double lambda0);

/// Build the derivative space and its Bernstein basis. Uses the closed-form
/// shifted spectrum when f0 is a positive multiple of a pure exponential (and
/// cross-validates it against the quotient realization); otherwise selects n
/// independent quotient members by column-pivoted QR on their endpoint
/// derivatives, throwing RankDeficiency when fewer exist.
[[nodiscard]] DerivedSpace derived_space(const std::shared_ptr<const Space>& space,
                                         const Interval& iv, const SpaceElement& f0,
                                         const OperatorOptions& opts = {});

/// c_k and d_k from endpoint derivatives of the two bases. Throws
/// DegenerateDenominator when a leading q-derivative at an endpoint is
/// numerically zero, and PreconditionFailed unless f0 > 0 at both endpoints.
[[nodiscard]] EndpointConstants compute_ck_dk(const BernsteinBasis& p_basis,
                                              const BernsteinBasis& q_basis,
                                              const SpaceElement& f0);

/// beta_0 = f0(a)/p_{n,0}(a), then beta_k = -beta_{k-1} d_{k-1} / c_k.
[[nodiscard]] std::vector<double> beta_via_recursion(const EndpointConstants& cd,
                                                     const SpaceElement& f0,
                                                     const BernsteinBasis& p_basis);

/// Coefficients of (f1/f0)' in the q-basis (collocation with audit, like
/// every other expansion here).
[[nodiscard]] Expansion compute_w(const SpaceElement& f0, const SpaceElement& f1,
                                  const BernsteinBasis& q_basis,
                                  const OperatorOptions& opts = {});

/// Classify w against zero with tolerance 1e-12 relative to max |w_k|.
[[nodiscard]] WClassification sufficiency_check(const std::vector<double>& w);

/// delta/Delta from the expansion coefficients; checks that delta_0 and
/// Delta_n vanish (they do algebraically whenever the coefficients really
/// expand f0 and f1).
[[nodiscard]] ProofDeltas proof_deltas(const ExpansionCoeffs& coeffs, const SpaceElement& f0,
                                       const SpaceElement& f1, const Interval& iv);

/// One-call pipeline collecting every chain quantity for f0, f1 on the space.
[[nodiscard]] ChainData compute_chain_data(const std::shared_ptr<const Space>& space,
                                           const Interval& iv, const SpaceElement& f0,
                                           const SpaceElement& f1,
                                           const OperatorOptions& opts = {});

/// Audit the internal identities of a ChainData: the recursion
/// c_{k+1} delta_{k+1} = w_k - delta_k d_k (1e-8 relative), vanishing
/// delta_0/Delta_n, endpoint-constant signs, and the sign conclusions for
/// delta/Delta that hold whenever no w_k is negative.
[[nodiscard]] ChainCheck verify_chain(const ChainData& data);

}  // namespace bernstein
