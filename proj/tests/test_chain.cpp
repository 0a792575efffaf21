#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

#include "bernstein/basis.hpp"
#include "bernstein/chain.hpp"
#include "bernstein/errors.hpp"
#include "bernstein/expspace.hpp"
#include "bernstein/operator.hpp"

using namespace bernstein;

namespace {

const double kPi = 3.14159265358979323846;

std::shared_ptr<const Space> poly_space(int dim) {
    return Space::make(Spectrum({{0.0, 0.0, dim}}));
}

std::shared_ptr<const Space> u4_space() {
    return Space::make(Spectrum({{0.0, 0.0, 3}, {0.0, 1.0, 1}, {0.0, -1.0, 1}}));
}

// conjugate pair plus two real exponentials: <cos, sin, e^x, e^{2x}>
std::shared_ptr<const Space> mixed_space() {
    return Space::make(Spectrum({{0.0, 1.0, 1}, {0.0, -1.0, 1}, {1.0, 0.0, 1}, {2.0, 0.0, 1}}));
}

SpaceElement unit_elem(const std::shared_ptr<const Space>& space, std::size_t j) {
    std::vector<double> cs(space->size(), 0.0);
    cs[j] = 1.0;
    return {space, cs};
}

}  // namespace

TEST_CASE("spectrum shifting") {
    const Spectrum exps({{0.0, 0.0, 1}, {1.0, 0.0, 1}, {2.0, 0.0, 1}});
    const Spectrum shifted = shift_spectrum(exps, 0.0);
    CHECK(shifted.dimension() == 2);
    CHECK(shifted.multiplicity(1.0, 0.0) == 1);
    CHECK(shifted.multiplicity(2.0, 0.0) == 1);

    const Spectrum repeated({{0.5, 0.0, 2}, {2.0, 0.0, 1}});
    const Spectrum shifted2 = shift_spectrum(repeated, 0.5);
    CHECK(shifted2.dimension() == 2);
    CHECK(shifted2.multiplicity(0.0, 0.0) == 1);
    CHECK(shifted2.multiplicity(1.5, 0.0) == 1);

    const Spectrum u4({{0.0, 0.0, 3}, {0.0, 1.0, 1}, {0.0, -1.0, 1}});
    const Spectrum du4 = shift_spectrum(u4, 0.0);
    CHECK(du4.dimension() == 4);
    CHECK(du4.multiplicity(0.0, 0.0) == 2);
    CHECK(du4.multiplicity(0.0, 1.0) == 1);

    CHECK_THROWS_AS((void)shift_spectrum(exps, 0.75), NotInSpectrum);
    // a two-dimensional parent leaves no valid spectrum behind
    const Spectrum tiny({{0.0, 0.0, 1}, {1.0, 0.0, 1}});
    CHECK_THROWS_AS((void)shift_spectrum(tiny, 0.0), PreconditionFailed);
}

TEST_CASE("derivative space of polynomials is the lower-degree polynomials") {
    const auto space = poly_space(4);
    const Interval iv(0.0, 1.0);
    const auto derived = derived_space(space, iv, unit_elem(space, 0));
    CHECK(derived.rep == DerivedRep::ShiftedSpectrum);
    REQUIRE(derived.shifted != nullptr);
    CHECK(derived.shifted->spectrum().multiplicity(0.0, 0.0) == 3);

    const auto direct = build_bernstein_basis(poly_space(3), iv);
    REQUIRE(derived.q_basis.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(derived.q_basis.coeffs(k)[j] - direct.coeffs(k)[j]) <= 1e-10);
        }
    }
}

TEST_CASE("derivative space of exponentials drops the constant") {
    const auto space = Space::make(Spectrum({{0.0, 0.0, 1}, {1.0, 0.0, 1}, {2.0, 0.0, 1}}));
    const auto derived = derived_space(space, Interval(0.0, 1.0), unit_elem(space, 0));
    CHECK(derived.rep == DerivedRep::ShiftedSpectrum);
    REQUIRE(derived.shifted != nullptr);
    CHECK(derived.shifted->size() == 2);
    CHECK(derived.shifted->find(RealBasisFunction::Kind::PolyExp, 0, 1.0, 0.0) == 0);
    CHECK(derived.shifted->find(RealBasisFunction::Kind::PolyExp, 0, 2.0, 0.0) == 1);
}

TEST_CASE("derivative space for a non-exponential positive divisor") {
    const auto space = mixed_space();
    const Interval iv(-0.7, 0.7);
    const SpaceElement f0 = unit_elem(space, 0);  // cos x
    const auto derived = derived_space(space, iv, f0);
    CHECK(derived.rep == DerivedRep::QuotientFamily);
    REQUIRE(derived.quotient != nullptr);
    CHECK(derived.quotient->size() == 3);
    CHECK(verify_zero_orders(derived.q_basis).ok);

    // structural form of the derivative space: x -> (f0^2 q_k)' / f0 lies in
    // the span of e^x and e^{2x}; fit the two coefficients at two points and
    // audit the fit across the interval
    for (std::size_t k = 0; k < 3; ++k) {
        const auto g = [&](double x) {
            return -2.0 * std::sin(x) * derived.q_basis.eval(k, x) +
                   std::cos(x) * derived.q_basis.eval(k, x, 1);
        };
        const double x1 = -0.3, x2 = 0.4;
        const double a11 = std::exp(x1), a12 = std::exp(2.0 * x1);
        const double a21 = std::exp(x2), a22 = std::exp(2.0 * x2);
        const double det = a11 * a22 - a12 * a21;
        const double ca = (g(x1) * a22 - a12 * g(x2)) / det;
        const double cb = (a11 * g(x2) - g(x1) * a21) / det;
        double sup_g = 0.0;
        for (int i = 0; i <= 100; ++i) sup_g = std::max(sup_g, std::abs(g(-0.7 + 1.4 * i / 100)));
        for (int i = 0; i <= 100; ++i) {
            const double x = -0.7 + 1.4 * i / 100;
            const double fit = ca * std::exp(x) + cb * std::exp(2.0 * x);
            CHECK(std::abs(fit - g(x)) <= 1e-6 * sup_g);
        }
    }
}

TEST_CASE("endpoint constants of the classical basis") {
    const auto space = poly_space(5);
    const Interval iv(0.0, 1.0);
    const auto p_basis = build_bernstein_basis(space, iv);
    const auto derived = derived_space(space, iv, unit_elem(space, 0));
    const auto cd = compute_ck_dk(p_basis, derived.q_basis, unit_elem(space, 0));
    REQUIRE(cd.c.size() == 4);
    REQUIRE(cd.d.size() == 4);
    for (std::size_t k = 1; k <= 4; ++k) {
        CHECK(cd.c[k - 1] == doctest::Approx(static_cast<double>(k)).epsilon(1e-9));
        CHECK(cd.d[k - 1] == doctest::Approx(-(4.0 - static_cast<double>(k - 1))).epsilon(1e-9));
    }
}

TEST_CASE("derivative of p/f0 decomposes into two q neighbors") {
    const auto space = u4_space();
    const Interval iv(0.0, 2.0);
    const SpaceElement f0 = unit_elem(space, 0);
    const auto p_basis = build_bernstein_basis(space, iv);
    const auto derived = derived_space(space, iv, f0);
    const auto cd = compute_ck_dk(p_basis, derived.q_basis, f0);
    const std::size_t n = 4;
    for (std::size_t k = 0; k <= n; ++k) {
        double sup = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double x = iv.a + iv.length() * i / 200.0;
            sup = std::max(sup, std::abs(p_basis.eval(k, x, 1)));
        }
        for (int i = 0; i <= 200; ++i) {
            const double x = iv.a + iv.length() * i / 200.0;
            // f0 = 1, so (p_k/f0)' is just the first derivative of p_k
            double expected = 0.0;
            if (k > 0) expected += cd.c[k - 1] * derived.q_basis.eval(k - 1, x);
            if (k < n) expected += cd.d[k] * derived.q_basis.eval(k, x);
            CHECK(std::abs(p_basis.eval(k, x, 1) - expected) <= 1e-8 * std::max(1.0, sup));
        }
    }
    // globally non-negative basis here, so the signs are forced
    for (double c : cd.c) CHECK(c > 0.0);
    for (double d : cd.d) CHECK(d < 0.0);
}

TEST_CASE("beta recursion reproduces the direct expansions") {
    // classical: binomial coefficients
    {
        const auto space = poly_space(5);
        const Interval iv(0.0, 1.0);
        const auto p_basis = build_bernstein_basis(space, iv);
        const auto derived = derived_space(space, iv, unit_elem(space, 0));
        const auto cd = compute_ck_dk(p_basis, derived.q_basis, unit_elem(space, 0));
        const auto beta = beta_via_recursion(cd, unit_elem(space, 0), p_basis);
        REQUIRE(beta.size() == 5);
        for (std::size_t k = 0; k <= 4; ++k) {
            CHECK(beta[k] ==
                  doctest::Approx(binomial(4, static_cast<int>(k))).epsilon(1e-8));
        }
    }
    // three exponentials
    {
        const auto space = Space::make(Spectrum({{0.0, 0.0, 1}, {1.0, 0.0, 1}, {2.0, 0.0, 1}}));
        const Interval iv(0.0, 1.0);
        const auto p_basis = build_bernstein_basis(space, iv);
        const auto derived = derived_space(space, iv, unit_elem(space, 0));
        const auto cd = compute_ck_dk(p_basis, derived.q_basis, unit_elem(space, 0));
        const auto recursed = beta_via_recursion(cd, unit_elem(space, 0), p_basis);
        const auto direct = expand_in_basis(unit_elem(space, 0), p_basis);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(std::abs(recursed[k] - direct[k]) <= 1e-9 * std::max(1.0, std::abs(direct[k])));
        }
    }
    // a single recursion step when the basis has just two members
    {
        const auto space = Space::make(Spectrum({{0.0, 0.0, 1}, {1.0, 0.0, 1}}));
        const Interval iv(0.0, 1.0);
        const auto p_basis = build_bernstein_basis(space, iv);
        const auto derived = derived_space(space, iv, unit_elem(space, 0));
        CHECK(derived.rep == DerivedRep::QuotientFamily);
        const auto cd = compute_ck_dk(p_basis, derived.q_basis, unit_elem(space, 0));
        REQUIRE(cd.c.size() == 1);
        const auto recursed = beta_via_recursion(cd, unit_elem(space, 0), p_basis);
        CHECK(recursed[1] == doctest::Approx(-recursed[0] * cd.d[0] / cd.c[0]).epsilon(1e-14));
        const auto direct = expand_in_basis(unit_elem(space, 0), p_basis);
        CHECK(std::abs(recursed[0] - direct[0]) <= 1e-9);
        CHECK(std::abs(recursed[1] - direct[1]) <= 1e-9);
    }
}

TEST_CASE("frozen endpoint constants for the symmetric trig space") {
    const auto space = u4_space();
    const Interval iv(0.0, 7.0 * kPi / 4.0);
    const SpaceElement f0 = unit_elem(space, 0);
    const auto p_basis = build_bernstein_basis(space, iv);
    const auto derived = derived_space(space, iv, f0);
    const auto cd = compute_ck_dk(p_basis, derived.q_basis, f0);
    const std::vector<double> frozen_d = {-0.41868553749035287, -0.31276810117651804,
                                          -1.3870926227445788, -0.37148195555080826};
    REQUIRE(cd.d.size() == frozen_d.size());
    for (std::size_t k = 0; k < frozen_d.size(); ++k) {
        CHECK(cd.d[k] == doctest::Approx(frozen_d[k]).epsilon(1e-8));
    }
    const auto beta = beta_via_recursion(cd, f0, p_basis);
    const std::vector<double> frozen_beta = {1.0, 0.41868553749035287, 0.06547574027546377,
                                             0.030273638768278627, 0.0028115276328197266};
    for (std::size_t k = 0; k < frozen_beta.size(); ++k) {
        CHECK(std::abs(beta[k] - frozen_beta[k]) <= 1e-8);
    }
}

TEST_CASE("frozen chain for the conjugate-pair space with f0 = cos") {
    const auto space = mixed_space();
    const Interval iv(-0.7, 0.7);
    const SpaceElement f0 = unit_elem(space, 0);  // cos
    const SpaceElement f1 = unit_elem(space, 1);  // sin
    const auto data = compute_chain_data(space, iv, f0, f1);

    const std::vector<double> frozen_c = {1.3074592597335941, 2.614918519467187,
                                          3.9223777792007812};
    const std::vector<double> frozen_d = {-2.8615814299456184, -1.1828597602509172,
                                          -0.4680150588374539};
    const std::vector<double> frozen_w = {1.70944972, 0.91440873, 0.15654372};
    REQUIRE(data.c.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(data.c[k] == doctest::Approx(frozen_c[k]).epsilon(1e-9));
        CHECK(data.d[k] == doctest::Approx(frozen_d[k]).epsilon(1e-9));
        CHECK(data.w[k] == doctest::Approx(frozen_w[k]).epsilon(1e-6));
    }
    CHECK(sufficiency_check(data.w) == WClassification::AllPositive);

    // the expansion ratios at the endpoints are tan(a) and tan(b)
    CHECK(data.gamma.front() / data.beta.front() ==
          doctest::Approx(std::tan(-0.7)).epsilon(1e-10));
    CHECK(data.gamma.back() / data.beta.back() ==
          doctest::Approx(std::tan(0.7)).epsilon(1e-10));

    const auto check = verify_chain(data);
    CHECK(check.ok);
    CHECK(check.c_positive);
    CHECK(check.d_negative);
    CHECK(check.recursion_residual < 1e-8);
    CHECK(check.w_class == WClassification::AllPositive);
}

TEST_CASE("w expansion for the classical configuration") {
    const auto space = poly_space(5);
    const Interval iv(0.0, 1.0);
    const auto derived = derived_space(space, iv, unit_elem(space, 0));
    const auto w = compute_w(unit_elem(space, 0), unit_elem(space, 1), derived.q_basis);
    REQUIRE(w.coeffs.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(w.coeffs[k] ==
              doctest::Approx(binomial(3, static_cast<int>(k))).epsilon(1e-10));
    }
    CHECK(w.coeffs[0] > 0.0);
    CHECK(sufficiency_check(w.coeffs) == WClassification::AllPositive);
}

TEST_CASE("sufficiency classification boundaries") {
    CHECK(sufficiency_check({1.0, 2.0, 3.0}) == WClassification::AllPositive);
    CHECK(sufficiency_check({0.0, 1.0}) == WClassification::AllNonNegative);
    CHECK(sufficiency_check({1e-15, 1.0}) == WClassification::AllNonNegative);
    CHECK(sufficiency_check({-1e-15, 1.0}) == WClassification::AllNonNegative);
    CHECK(sufficiency_check({-1.0, 1.0}) == WClassification::SomeNegative);
    CHECK(sufficiency_check({0.0, 0.0}) == WClassification::AllNonNegative);
}

TEST_CASE("proof deltas for the classical configuration") {
    const auto space = poly_space(5);
    const Interval iv(0.0, 1.0);
    const auto basis = build_bernstein_basis(space, iv);
    ExpansionCoeffs coeffs;
    coeffs.beta = expand_in_basis(unit_elem(space, 0), basis);
    coeffs.gamma = expand_in_basis(unit_elem(space, 1), basis);
    const auto pd = proof_deltas(coeffs, unit_elem(space, 0), unit_elem(space, 1), iv);
    REQUIRE(pd.delta.size() == 5);
    // f1(a) = 0, so delta = gamma = (k/n) C(n,k); f1(b)/f0(b) = 1, so
    // Delta = gamma - beta <= 0
    const std::vector<double> expect_delta = {0.0, 1.0, 3.0, 3.0, 1.0};
    for (std::size_t k = 0; k <= 4; ++k) {
        CHECK(std::abs(pd.delta[k] - expect_delta[k]) <= 1e-8);
        CHECK(pd.Delta[k] <= 1e-10);
    }
    CHECK(std::abs(pd.delta[0]) <= 1e-12);
    CHECK(std::abs(pd.Delta[4]) <= 1e-12);
}

TEST_CASE("chain diagnostics on the infeasible trig configuration") {
    const auto space = u4_space();
    const Interval iv(0.0, 7.0 * kPi / 4.0);
    const SpaceElement f0 = unit_elem(space, 0);
    const SpaceElement f1(space, {1.0, 1.0, 0.0, -1.0, 0.0});  // 1 + x - cos x
    const auto data = compute_chain_data(space, iv, f0, f1);

    CHECK(sufficiency_check(data.w) == WClassification::SomeNegative);
    // the k = 2 sandwich violation shows up as a positive Delta_2
    CHECK(data.Delta[2] > 0.0);
    CHECK(std::abs(data.delta.front()) <= 1e-10);
    CHECK(std::abs(data.Delta.back()) <= 1e-10);

    // the recursion is an identity; it holds regardless of feasibility
    const auto check = verify_chain(data);
    CHECK(check.recursion_residual < 1e-8);
    CHECK(check.endpoints_zero);
    CHECK(check.w_class == WClassification::SomeNegative);
    CHECK(check.ok);
}

TEST_CASE("chain data sizes are consistent") {
    const auto space = poly_space(4);
    const auto data =
        compute_chain_data(space, Interval(0.0, 1.0), unit_elem(space, 0), unit_elem(space, 1));
    CHECK(data.c.size() == 3);
    CHECK(data.d.size() == 3);
    CHECK(data.w.size() == 3);
    CHECK(data.delta.size() == 4);
    CHECK(data.Delta.size() == 4);
    CHECK(data.beta.size() == 4);
    CHECK(data.gamma.size() == 4);
    CHECK_THROWS_AS((void)verify_chain(ChainData{{1.0}, {}, {}, {}, {}, {}, {}}),
                    PreconditionFailed);
}
