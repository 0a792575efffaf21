#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "bernstein/errors.hpp"

namespace bernstein {

/// Closed interval [a, b], a < b.
struct Interval {
    double a;
    double b;

    Interval(double a_, double b_);

    [[nodiscard]] double length() const noexcept { return b - a; }
};

/// One eigenvalue re + i*im of the defining ODE, with its multiplicity.
struct SpectrumEntry {
    double re = 0.0;
    double im = 0.0;
    int mult = 1;
};

/// Multiset of eigenvalues defining an exponential-polynomial space: the
/// solution space of (d/dx - l_0)...(d/dx - l_n) f = 0, dimension n+1 equal
/// to the total multiplicity. Entries are kept in a canonical order (by re,
/// then |im|, then im) so coefficient vectors are reproducible.
class Spectrum {
public:
    explicit Spectrum(std::vector<SpectrumEntry> entries);

    [[nodiscard]] const std::vector<SpectrumEntry>& entries() const noexcept { return entries_; }

    /// n + 1: sum of all multiplicities.
    [[nodiscard]] int dimension() const noexcept { return dimension_; }

    /// Largest |im| over all eigenvalues (0 for an all-real spectrum).
    [[nodiscard]] double max_imag() const noexcept;

    /// Multiplicity of the exact eigenvalue re + i*im, 0 if absent.
    [[nodiscard]] int multiplicity(double re, double im) const noexcept;

private:
    std::vector<SpectrumEntry> entries_;
    int dimension_ = 0;
};

/// Real-form basis function x^power * e^{alpha x} * {1 | cos(beta x) | sin(beta x)}.
struct RealBasisFunction {
    enum class Kind { PolyExp, PolyExpCos, PolyExpSin };

    Kind kind = Kind::PolyExp;
    int power = 0;
    double alpha = 0.0;
    double beta = 0.0;  // frequency; 0 for PolyExp

    /// order-th derivative at x. Leibniz on the x^power factor; the
    /// exponential-trigonometric factor differentiates through powers of
    /// (alpha + i*beta), keeping all arithmetic closed-form.
    [[nodiscard]] double deriv(double x, int order) const;

    [[nodiscard]] double operator()(double x) const { return deriv(x, 0); }
};

/// The canonical real-form basis generated by a spectrum: x^j e^{re x} for
/// real eigenvalues, x^j e^{re x} cos(|im| x) and ... sin(|im| x) for each
/// conjugate pair, j ascending within each group, cos before sin.
[[nodiscard]] std::vector<RealBasisFunction> build_space(const Spectrum& spectrum);

/// A list of functions evaluable with derivatives of any order; what the
/// Bernstein-basis builder works against. Implemented by Space (canonical
/// exponential-polynomial bases) and by the derivative-space family.
class FunctionFamily {
public:
    virtual ~FunctionFamily() = default;

    [[nodiscard]] virtual std::size_t size() const = 0;

    /// order-th derivative of member i at x (order 0 = value).
    [[nodiscard]] virtual double deriv(std::size_t i, double x, int order) const = 0;
};

/// An exponential-polynomial space: spectrum plus its canonical basis.
class Space final : public FunctionFamily {
public:
    explicit Space(Spectrum spectrum);

    [[nodiscard]] static std::shared_ptr<const Space> make(Spectrum spectrum);

    [[nodiscard]] std::size_t size() const override { return functions_.size(); }
    [[nodiscard]] double deriv(std::size_t i, double x, int order) const override;

    [[nodiscard]] const Spectrum& spectrum() const noexcept { return spectrum_; }
    [[nodiscard]] const std::vector<RealBasisFunction>& functions() const noexcept {
        return functions_;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// Index of the basis function with exactly these parameters, npos if absent.
    [[nodiscard]] std::size_t find(RealBasisFunction::Kind kind, int power, double alpha,
                                   double beta) const noexcept;

private:
    Spectrum spectrum_;
    std::vector<RealBasisFunction> functions_;
};

/// Element of a Space: a coefficient vector over the canonical basis.
class SpaceElement {
public:
    SpaceElement(std::shared_ptr<const Space> space, std::vector<double> coeffs);

    /// order-th derivative at x, summed analytically over the basis.
    [[nodiscard]] double deriv(double x, int order) const;
    [[nodiscard]] double operator()(double x) const { return deriv(x, 0); }

    [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] const std::shared_ptr<const Space>& space() const noexcept { return space_; }

    SpaceElement& operator+=(const SpaceElement& rhs);
    SpaceElement& operator-=(const SpaceElement& rhs);
    SpaceElement& operator*=(double s);

    [[nodiscard]] friend SpaceElement operator+(SpaceElement lhs, const SpaceElement& rhs) {
        lhs += rhs;
        return lhs;
    }
    [[nodiscard]] friend SpaceElement operator-(SpaceElement lhs, const SpaceElement& rhs) {
        lhs -= rhs;
        return lhs;
    }
    [[nodiscard]] friend SpaceElement operator*(double s, SpaceElement e) {
        e *= s;
        return e;
    }

private:
    std::shared_ptr<const Space> space_;
    std::vector<double> coeffs_;
};

/// Binomial coefficient as a double (exact for every case this library needs).
[[nodiscard]] double binomial(int n, int k) noexcept;

/// (f/g)^{(order)}(x) by the recurrence obtained from Leibniz on f = g*(f/g):
///   (f/g)^{(m)} = [f^{(m)} - sum_{j=1..m} C(m,j) g^{(j)} (f/g)^{(m-j)}] / g.
/// Throws DivisionByZero when |g(x)| < denom_floor (literal-zero protection
/// only; conditioning is the caller's concern).
[[nodiscard]] double quotient_deriv(const SpaceElement& f, const SpaceElement& g, double x,
                                    int order, double denom_floor = 1e-300);

/// Sufficient interval-length bound for the Chebyshev property: pi / max|im|,
/// +infinity for an all-real spectrum (no constraint arises).
[[nodiscard]] double mn_bound(const Spectrum& spectrum) noexcept;

/// Result of the randomized Chebyshev-property check.
struct EctReport {
    bool ok = true;
    int allowed_zeros = 0;          // dimension - 1
    int worst_zeros = 0;            // largest count seen over all samples
    std::vector<double> witness;    // coefficients of the worst sample (empty if none exceeded)
};

/// Samples random unit coefficient vectors and counts their zeros on a grid
/// (sign changes, plus tangencies detected through a derivative sign change
/// at near-zero dips). Returns ok = false with a witness if any sample shows
/// more than dimension-1 zeros. A `true` answer is evidence, not proof.
[[nodiscard]] EctReport verify_ect_heuristic(const Spectrum& spectrum, const Interval& iv,
                                             int trials, int grid_points,
                                             std::uint64_t seed = 20260818ULL);

}  // namespace bernstein
