#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "bernstein/basis.hpp"
#include "bernstein/errors.hpp"
#include "bernstein/expspace.hpp"

using namespace bernstein;

namespace {

const double kPi = 3.14159265358979323846;

std::shared_ptr<const Space> poly_space(int dim) {
    return Space::make(Spectrum({{0.0, 0.0, dim}}));
}

std::shared_ptr<const Space> one_cos_sin() {
    return Space::make(Spectrum({{0.0, 0.0, 1}, {0.0, 1.0, 1}, {0.0, -1.0, 1}}));
}

std::shared_ptr<const Space> u4_like() {
    return Space::make(Spectrum({{0.0, 0.0, 3}, {0.0, 1.0, 1}, {0.0, -1.0, 1}}));
}

void check_coeffs(const std::vector<double>& got, const std::vector<double>& want, double tol) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= tol);
}

// Check g(x) is a fixed positive multiple of f(x) across [lo, hi].
void check_proportional(const std::function<double(double)>& f,
                        const std::function<double(double)>& g, double lo, double hi,
                        double rel_tol) {
    const int m = 200;
    double scale = 0.0;
    double ratio = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double x = lo + (hi - lo) * i / m;
        scale = std::max(scale, std::abs(g(x)));
    }
    REQUIRE(scale > 0.0);
    for (int i = 0; i <= m; ++i) {
        const double x = lo + (hi - lo) * i / m;
        if (std::abs(f(x)) > 0.1 * scale) {
            ratio = g(x) / f(x);
            break;
        }
    }
    REQUIRE(ratio != 0.0);
    for (int i = 0; i <= m; ++i) {
        const double x = lo + (hi - lo) * i / m;
        CHECK(std::abs(g(x) - ratio * f(x)) <= rel_tol * scale);
    }
}

}  // namespace

TEST_CASE("collocation matrix layout") {
    const auto quad = poly_space(3);
    const Interval unit(0.0, 1.0);

    const auto k1 = collocation_matrix(*quad, unit, 1);
    REQUIRE(k1.size() == 2);
    check_coeffs(k1[0], {1.0, 0.0, 0.0}, 0.0);  // value at 0
    check_coeffs(k1[1], {1.0, 1.0, 1.0}, 0.0);  // value at 1

    const auto k0 = collocation_matrix(*quad, unit, 0);
    REQUIRE(k0.size() == 2);  // all rows at b
    check_coeffs(k0[0], {1.0, 1.0, 1.0}, 0.0);
    check_coeffs(k0[1], {0.0, 1.0, 2.0}, 0.0);

    const auto trig = one_cos_sin();
    const auto k2 = collocation_matrix(*trig, Interval(0.0, kPi / 2.0), 2);
    REQUIRE(k2.size() == 2);
    check_coeffs(k2[0], {1.0, 1.0, 0.0}, 1e-15);  // value at 0
    check_coeffs(k2[1], {0.0, 0.0, 1.0}, 1e-15);  // first derivative at 0
}

TEST_CASE("classical quadratic basis comes out exactly") {
    const auto basis = build_bernstein_basis(poly_space(3), Interval(0.0, 1.0));
    REQUIRE(basis.degree() == 2);
    check_coeffs(basis.coeffs(0), {1.0, -2.0, 1.0}, 1e-12);   // (1-x)^2
    check_coeffs(basis.coeffs(1), {0.0, 1.0, -1.0}, 1e-12);   // x(1-x)
    check_coeffs(basis.coeffs(2), {0.0, 0.0, 1.0}, 1e-12);    // x^2
    CHECK(basis.warnings().empty());

    const auto report = verify_zero_orders(basis);
    CHECK(report.ok);
    CHECK(report.worst_residual < 1e-12);
}

TEST_CASE("basis functions vanish to the defining orders") {
    const auto basis = build_bernstein_basis(u4_like(), Interval(0.0, 7.0 * kPi / 4.0));
    const auto report = verify_zero_orders(basis);
    CHECK(report.ok);
    CHECK(report.worst_residual < 1e-8);
    // normalization: k-th derivative at a equals k!
    double fac = 1.0;
    for (std::size_t k = 0; k <= 4; ++k) {
        if (k > 0) fac *= static_cast<double>(k);
        CHECK(basis.eval(k, 0.0, static_cast<int>(k)) == doctest::Approx(fac).epsilon(1e-9));
    }
}

TEST_CASE("a perturbed basis fails the zero-order audit") {
    const auto basis = build_bernstein_basis(poly_space(3), Interval(0.0, 1.0));
    auto coeffs = std::vector<std::vector<double>>{basis.coeffs(0), basis.coeffs(1),
                                                   basis.coeffs(2)};
    coeffs[0][1] += 1e-3;
    const BernsteinBasis broken(basis.family_ptr(), basis.interval(), coeffs,
                                basis.lead_at_a(), {});
    const auto report = verify_zero_orders(broken);
    CHECK_FALSE(report.ok);
    CHECK(report.worst_residual > 1e-5);
}

TEST_CASE("basis for <1, x, x^2, cos, sin> matches the structured closed form") {
    const double b = 7.0 * kPi / 4.0;
    const auto basis = build_bernstein_basis(u4_like(), Interval(0.0, b));
    // index 3 is a positive multiple of
    //   (sin b - b)(cos x - 1 + x^2/2) + (cos b - 1 + b^2/2)(x - sin x)
    const auto closed = [&](double x) {
        return (std::sin(b) - b) * (std::cos(x) - 1.0 + 0.5 * x * x) +
               (std::cos(b) - 1.0 + 0.5 * b * b) * (x - std::sin(x));
    };
    check_proportional(closed, [&](double x) { return basis.eval(3, x); }, 0.0, b, 1e-8);
}

TEST_CASE("reflected basis functions on the symmetric trig space") {
    const double b = 7.0 * kPi / 4.0;
    const auto basis = build_bernstein_basis(u4_like(), Interval(0.0, b));
    check_proportional([&](double x) { return basis.eval(4, b - x); },
                       [&](double x) { return basis.eval(0, x); }, 0.0, b, 1e-8);
    check_proportional([&](double x) { return basis.eval(3, b - x); },
                       [&](double x) { return basis.eval(1, x); }, 0.0, b, 1e-8);
}

TEST_CASE("sin vanishing at both endpoints defeats the construction") {
    const auto pair = Space::make(Spectrum({{0.0, 1.0, 1}, {0.0, -1.0, 1}}));
    CHECK_THROWS_AS((void)build_bernstein_basis(pair, Interval(0.0, 2.0 * kPi)),
                    NotChebyshevAtEndpoints);
}

TEST_CASE("both factorization routes give the same normalized basis") {
    BasisBuildOptions svd_opts;
    svd_opts.route = KernelRoute::Svd;
    BasisBuildOptions lu_opts;
    lu_opts.route = KernelRoute::FullPivLu;
    const double b = 7.0 * kPi / 4.0;
    const auto via_svd = build_bernstein_basis(u4_like(), Interval(0.0, b), svd_opts);
    const auto via_lu = build_bernstein_basis(u4_like(), Interval(0.0, b), lu_opts);
    for (std::size_t k = 0; k <= 4; ++k) {
        double scale = 0.0;
        for (double c : via_svd.coeffs(k)) scale = std::max(scale, std::abs(c));
        for (std::size_t j = 0; j < via_svd.coeffs(k).size(); ++j) {
            CHECK(std::abs(via_svd.coeffs(k)[j] - via_lu.coeffs(k)[j]) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("non-negativity report on the classical basis") {
    const auto basis = build_bernstein_basis(poly_space(4), Interval(0.0, 1.0));
    const auto report = verify_nonneg(basis, 50 * 4 + 200);
    REQUIRE(report.entries.size() == 4);
    CHECK(report.all_global());
    for (const auto& e : report.entries) {
        CHECK(e.local_a);
        CHECK(e.local_b);
        CHECK(e.min_value >= -1e-12);
    }
}

TEST_CASE("locally non-negative but globally negative middle function") {
    // On [0, 3pi - 0.1] the middle function behaves like sin plus a small
    // perturbation: fine near both endpoints, negative in between.
    const auto basis = build_bernstein_basis(one_cos_sin(), Interval(0.0, 3.0 * kPi - 0.1));
    const auto report = verify_nonneg(basis, 500);
    REQUIRE(report.entries.size() == 3);
    CHECK_FALSE(report.entries[1].global);
    CHECK(report.entries[1].local_a);
    CHECK(report.entries[1].local_b);
    CHECK(report.entries[1].min_value < 0.0);
    const double x = report.entries[1].argmin;
    CHECK(x > 0.05 * (3.0 * kPi - 0.1));
    CHECK(x < 0.95 * (3.0 * kPi - 0.1));
}

TEST_CASE("trig basis on [0, pi] is globally non-negative") {
    const auto basis = build_bernstein_basis(one_cos_sin(), Interval(0.0, kPi));
    const auto report = verify_nonneg(basis, 500);
    CHECK(report.all_global());
}

TEST_CASE("first derivative at b is negative for the next-to-last function") {
    const auto classical = build_bernstein_basis(poly_space(3), Interval(0.0, 1.0));
    CHECK(classical.eval(1, 1.0, 1) < 0.0);
    const auto trig = build_bernstein_basis(one_cos_sin(), Interval(0.0, kPi));
    CHECK(trig.eval(1, kPi, 1) < 0.0);
}

TEST_CASE("degree caps") {
    CHECK_THROWS_AS((void)build_bernstein_basis(poly_space(22), Interval(0.0, 1.0)),
                    PreconditionFailed);
    const auto tall = build_bernstein_basis(poly_space(14), Interval(0.0, 1.0));
    CHECK_FALSE(tall.warnings().empty());
    CHECK(verify_zero_orders(tall).ok);
}

TEST_CASE("non-negativity audit rejects a too-small grid") {
    const auto basis = build_bernstein_basis(poly_space(3), Interval(0.0, 1.0));
    CHECK_THROWS_AS((void)verify_nonneg(basis, 10), PreconditionFailed);
}

TEST_CASE("rescaling validation") {
    const auto basis = build_bernstein_basis(poly_space(3), Interval(0.0, 1.0));
    CHECK_THROWS_AS((void)basis.rescaled({1.0, 2.0}), PreconditionFailed);
    CHECK_THROWS_AS((void)basis.rescaled({1.0, -2.0, 1.0}), PreconditionFailed);
    const auto doubled = basis.rescaled({2.0, 2.0, 2.0});
    CHECK(doubled.eval(1, 0.5) == doctest::Approx(2.0 * basis.eval(1, 0.5)).epsilon(1e-14));
    CHECK(doubled.lead_at_a()[2] == doctest::Approx(4.0).epsilon(1e-14));
}
