#include "bernstein/chain.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "bernstein/errors.hpp"
#include "bernstein/linalg.hpp"

namespace bernstein {

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// f0 written as coeff * (pure exponential basis function): requires exactly
// one nonzero coefficient sitting on an x^0 e^{alpha x} member. Exact zeros
// only; a perturbed coefficient means f0 is genuinely not an exponential.
std::optional<std::pair<double, double>> pure_exponential(const SpaceElement& f0) {
    const auto& cs = f0.coeffs();
    const auto& fns = f0.space()->functions();
    std::size_t hit = Space::npos;
    for (std::size_t j = 0; j < cs.size(); ++j) {
        if (cs[j] == 0.0) continue;
        if (hit != Space::npos) return std::nullopt;
        hit = j;
    }
    if (hit == Space::npos) return std::nullopt;
    const RealBasisFunction& fn = fns[hit];
    if (fn.kind != RealBasisFunction::Kind::PolyExp || fn.power != 0) return std::nullopt;
    if (!(cs[hit] > 0.0)) return std::nullopt;
    return std::make_pair(cs[hit], fn.alpha);  // (coefficient, lambda0)
}

std::shared_ptr<const QuotientFamily> build_quotient_family(
    const std::shared_ptr<const Space>& space, const Interval& iv, const SpaceElement& f0,
    double rank_tol) {
    const std::size_t dim = space->size();
    const std::size_t n = dim - 1;

    std::vector<SpaceElement> candidates;
    candidates.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<double> cs(dim, 0.0);
        cs[i] = 1.0;
        candidates.emplace_back(space, cs);
    }

    // Rank the candidates u_i = (b_i/f0)' by their endpoint derivatives; the
    // member aligned with f0 itself differentiates to zero and drops out.
    MatrixRows probe(2 * n, std::vector<double>(dim));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < dim; ++i) {
            probe[j][i] = quotient_deriv(candidates[i], f0, iv.a, static_cast<int>(j) + 1);
            probe[n + j][i] =
                quotient_deriv(candidates[i], f0, iv.b, static_cast<int>(j) + 1);
        }
    }
    std::vector<std::size_t> selected = pivot_columns(probe, n, rank_tol);
    if (selected.size() < n) {
        throw RankDeficiency("derivative space has fewer than " + std::to_string(n) +
                             " independent members");
    }
    return std::make_shared<QuotientFamily>(space, f0, std::move(selected));
}

void cross_validate_bases(const BernsteinBasis& lhs, const BernsteinBasis& rhs) {
    const Interval& iv = lhs.interval();
    const std::size_t points = 200;
    for (std::size_t k = 0; k < lhs.size(); ++k) {
        double sup_l = 0.0;
        std::vector<double> lv(points), rv(points);
        for (std::size_t i = 0; i < points; ++i) {
            const double x = iv.a + iv.length() * static_cast<double>(i) /
                                        static_cast<double>(points - 1);
            lv[i] = lhs.eval(k, x);
            rv[i] = rhs.eval(k, x);
            sup_l = std::max(sup_l, std::abs(lv[i]));
        }
        double ratio = 0.0;
        for (std::size_t i = 0; i < points; ++i) {
            if (std::abs(lv[i]) > 0.1 * sup_l) {
                ratio = rv[i] / lv[i];
                break;
            }
        }
        if (!(ratio > 0.0)) {
            throw Error("derivative-space realizations disagree in sign for q index " +
                        std::to_string(k));
        }
        for (std::size_t i = 0; i < points; ++i) {
            if (std::abs(rv[i] - ratio * lv[i]) > 1e-7 * std::max(1.0, sup_l * ratio)) {
                throw Error("derivative-space realizations disagree for q index " +
                            std::to_string(k));
            }
        }
    }
}

}  // namespace

QuotientFamily::QuotientFamily(std::shared_ptr<const Space> parent, SpaceElement f0,
                               std::vector<std::size_t> members)
    : parent_(std::move(parent)), f0_(std::move(f0)), members_(std::move(members)) {
    if (!parent_ || members_.empty()) {
        throw PreconditionFailed("quotient family needs a parent space and members");
    }
    elems_.reserve(members_.size());
    for (std::size_t idx : members_) {
        if (idx >= parent_->size()) throw OutOfRange("quotient member index out of range");
        std::vector<double> cs(parent_->size(), 0.0);
        cs[idx] = 1.0;
        elems_.emplace_back(parent_, cs);
    }
}

double QuotientFamily::deriv(std::size_t i, double x, int order) const {
    if (i >= elems_.size()) throw OutOfRange("quotient member index out of range");
    return quotient_deriv(elems_[i], f0_, x, order + 1);
}

Spectrum shift_spectrum(const Spectrum& spec, double lambda0) {
    if (spec.multiplicity(lambda0, 0.0) < 1) {
        throw NotInSpectrum("shift value " + std::to_string(lambda0) +
                            " is not a real eigenvalue of the spectrum");
    }
    std::vector<SpectrumEntry> shifted;
    for (const SpectrumEntry& e : spec.entries()) {
        SpectrumEntry s{e.re - lambda0, e.im, e.mult};
        if (s.re == 0.0 && s.im == 0.0) s.mult -= 1;
        if (s.mult > 0) shifted.push_back(s);
    }
    return Spectrum(std::move(shifted));
}

DerivedSpace derived_space(const std::shared_ptr<const Space>& space, const Interval& iv,
                           const SpaceElement& f0, const OperatorOptions& opts) {
    if (!space || f0.space().get() != space.get()) {
        throw PreconditionFailed("f0 must be an element of the given space");
    }
    for (std::size_t i = 0; i < opts.audit_grid; ++i) {
        const double x = iv.a + iv.length() * static_cast<double>(i) /
                                    static_cast<double>(opts.audit_grid - 1);
        if (!(f0(x) > 0.0)) {
            throw PreconditionFailed("f0 must be positive on [a, b]");
        }
    }

    const auto expo = pure_exponential(f0);
    if (expo && space->size() >= 3) {
        const auto shifted = Space::make(shift_spectrum(space->spectrum(), expo->second));
        BernsteinBasis q_basis = build_bernstein_basis(shifted, iv, opts.basis);
        // The generic realization must produce the same basis; both are
        // normalized identically, so this can fail only on a real defect.
        const auto quotient = build_quotient_family(space, iv, f0, opts.basis.rank_tol);
        const BernsteinBasis other = build_bernstein_basis(quotient, iv, opts.basis);
        cross_validate_bases(q_basis, other);
        return {DerivedRep::ShiftedSpectrum, shifted, nullptr, std::move(q_basis)};
    }

    auto quotient = build_quotient_family(space, iv, f0, opts.basis.rank_tol);
    BernsteinBasis q_basis = build_bernstein_basis(quotient, iv, opts.basis);
    return {DerivedRep::QuotientFamily, nullptr, std::move(quotient), std::move(q_basis)};
}

EndpointConstants compute_ck_dk(const BernsteinBasis& p_basis, const BernsteinBasis& q_basis,
                                const SpaceElement& f0) {
    const std::size_t n = p_basis.degree();
    if (q_basis.size() + 1 != p_basis.size()) {
        throw PreconditionFailed("q-basis must have one member fewer than the p-basis");
    }
    const Interval& iv = p_basis.interval();
    if (!(f0(iv.a) > 0.0) || !(f0(iv.b) > 0.0)) {
        throw PreconditionFailed("f0 must be positive at the endpoints");
    }

    const auto safe_q = [&q_basis](std::size_t k, double x, int order) {
        const double value = q_basis.eval(k, x, order);
        double scale = 0.0;
        for (double c : q_basis.coeffs(k)) scale = std::max(scale, std::abs(c));
        if (std::abs(value) < 1e-12 * std::max(scale, 1.0)) {
            throw DegenerateDenominator("leading endpoint derivative of q index " +
                                        std::to_string(k) + " is numerically zero");
        }
        return value;
    };

    EndpointConstants cd;
    cd.c.resize(n);
    cd.d.resize(n);
    for (std::size_t k = 1; k <= n; ++k) {
        cd.c[k - 1] = p_basis.eval(k, iv.a, static_cast<int>(k)) /
                      (f0(iv.a) * safe_q(k - 1, iv.a, static_cast<int>(k) - 1));
    }
    for (std::size_t k = 0; k < n; ++k) {
        cd.d[k] = p_basis.eval(k, iv.b, static_cast<int>(n - k)) /
                  (f0(iv.b) * safe_q(k, iv.b, static_cast<int>(n - 1 - k)));
    }
    return cd;
}

std::vector<double> beta_via_recursion(const EndpointConstants& cd, const SpaceElement& f0,
                                       const BernsteinBasis& p_basis) {
    const std::size_t n = p_basis.degree();
    if (cd.c.size() != n || cd.d.size() != n) {
        throw PreconditionFailed("endpoint constants do not match the basis degree");
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (cd.c[k] == 0.0 || cd.d[k] == 0.0) {
            throw PreconditionFailed("endpoint constants must be nonzero");
        }
    }
    const double a = p_basis.interval().a;
    std::vector<double> beta(n + 1);
    beta[0] = f0(a) / p_basis.eval(0, a);
    for (std::size_t k = 1; k <= n; ++k) {
        beta[k] = -beta[k - 1] * cd.d[k - 1] / cd.c[k - 1];
    }
    return beta;
}

Expansion compute_w(const SpaceElement& f0, const SpaceElement& f1,
                    const BernsteinBasis& q_basis, const OperatorOptions& opts) {
    const SmoothFn target = [&f0, &f1](double x, int order) {
        return quotient_deriv(f1, f0, x, order + 1);
    };
    return expand_smooth(target, q_basis, opts);
}

WClassification sufficiency_check(const std::vector<double>& w) {
    const double scale = max_abs(w);
    if (scale == 0.0) return WClassification::AllNonNegative;
    const double tol = 1e-12 * scale;
    bool strictly_positive = true;
    for (double x : w) {
        if (x < -tol) return WClassification::SomeNegative;
        if (x <= tol) strictly_positive = false;
    }
    return strictly_positive ? WClassification::AllPositive : WClassification::AllNonNegative;
}

ProofDeltas proof_deltas(const ExpansionCoeffs& coeffs, const SpaceElement& f0,
                         const SpaceElement& f1, const Interval& iv) {
    const std::size_t m = coeffs.beta.size();
    if (m < 2 || coeffs.gamma.size() != m) {
        throw PreconditionFailed("expansion coefficient vectors are inconsistent");
    }
    if (!(f0(iv.a) > 0.0) || !(f0(iv.b) > 0.0)) {
        throw PreconditionFailed("f0 must be positive at the endpoints");
    }
    const double ha = f1(iv.a) / f0(iv.a);
    const double hb = f1(iv.b) / f0(iv.b);
    ProofDeltas pd;
    pd.delta.resize(m);
    pd.Delta.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        pd.delta[k] = coeffs.gamma[k] - ha * coeffs.beta[k];
        pd.Delta[k] = coeffs.gamma[k] - hb * coeffs.beta[k];
    }
    const double scale =
        std::max({1.0, max_abs(coeffs.gamma), std::abs(ha) * max_abs(coeffs.beta),
                  std::abs(hb) * max_abs(coeffs.beta)});
    if (std::abs(pd.delta.front()) > 1e-10 * scale || std::abs(pd.Delta.back()) > 1e-10 * scale) {
        throw PreconditionFailed(
            "coefficients are not a consistent expansion (endpoint deltas do not vanish)");
    }
    return pd;
}

ChainData compute_chain_data(const std::shared_ptr<const Space>& space, const Interval& iv,
                             const SpaceElement& f0, const SpaceElement& f1,
                             const OperatorOptions& opts) {
    const BernsteinBasis p_basis = build_bernstein_basis(space, iv, opts.basis);
    ChainData data;
    data.beta = expand_in_basis(f0, p_basis, opts);
    data.gamma = expand_in_basis(f1, p_basis, opts);

    const DerivedSpace derived = derived_space(space, iv, f0, opts);
    const EndpointConstants cd = compute_ck_dk(p_basis, derived.q_basis, f0);
    data.c = cd.c;
    data.d = cd.d;
    data.w = compute_w(f0, f1, derived.q_basis, opts).coeffs;

    const ProofDeltas pd = proof_deltas({data.beta, data.gamma}, f0, f1, iv);
    data.delta = pd.delta;
    data.Delta = pd.Delta;
    return data;
}

ChainCheck verify_chain(const ChainData& data) {
    ChainCheck check;
    const std::size_t n = data.c.size();
    if (data.d.size() != n || data.w.size() != n || data.delta.size() != n + 1 ||
        data.Delta.size() != n + 1) {
        throw PreconditionFailed("chain data vectors have inconsistent lengths");
    }

    const double dscale = std::max({1.0, max_abs(data.delta), max_abs(data.Delta)});
    check.endpoints_zero = std::abs(data.delta.front()) <= 1e-10 * dscale &&
                           std::abs(data.Delta.back()) <= 1e-10 * dscale;

    double term_scale = 1e-300;
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double lhs = data.c[k] * data.delta[k + 1];
        const double rhs = data.w[k] - data.delta[k] * data.d[k];
        worst = std::max(worst, std::abs(lhs - rhs));
        term_scale = std::max({term_scale, std::abs(lhs), std::abs(data.w[k]),
                               std::abs(data.delta[k] * data.d[k])});
    }
    check.recursion_residual = worst / term_scale;

    check.c_positive = std::all_of(data.c.begin(), data.c.end(), [](double x) { return x > 0.0; });
    check.d_negative = std::all_of(data.d.begin(), data.d.end(), [](double x) { return x < 0.0; });
    check.w_class = sufficiency_check(data.w);

    check.delta_bounds_ok = true;
    if (check.w_class != WClassification::SomeNegative) {
        for (double x : data.delta) {
            if (x < -1e-10 * dscale) check.delta_bounds_ok = false;
        }
        for (double x : data.Delta) {
            if (x > 1e-10 * dscale) check.delta_bounds_ok = false;
        }
    }
    check.ok = check.endpoints_zero && check.recursion_residual < 1e-8 && check.delta_bounds_ok;
    return check;
}

}  // namespace bernstein
