#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <vector>

#include "bernstein/linalg.hpp"

using namespace bernstein;

namespace {

// Compare two unit vectors up to overall sign.
void check_same_direction(const std::vector<double>& u, const std::vector<double>& v,
                          double tol) {
    REQUIRE(u.size() == v.size());
    double dot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
    const double sign = dot >= 0.0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(std::abs(u[i] - sign * v[i]) <= tol);
    }
}

}  // namespace

TEST_CASE("svd kernel of a full-rank 2x3 system") {
    const MatrixRows rows = {{1.0, 0.0, -1.0}, {0.0, 1.0, -1.0}};
    const auto k = svd_kernel(rows, 1e-10);
    REQUIRE(k.vector.size() == 3);
    CHECK(k.unique);
    CHECK(k.residual < 1e-14);
    const double s = 1.0 / std::sqrt(3.0);
    check_same_direction(k.vector, {s, s, s}, 1e-14);
}

TEST_CASE("svd and lu kernels agree up to sign") {
    const MatrixRows rows = {{2.0, -1.0, 0.5, 0.0},
                             {0.0, 3.0, 1.0, -2.0},
                             {1.0, 1.0, 1.0, 1.0}};
    const auto a = svd_kernel(rows, 1e-10);
    const auto b = lu_kernel(rows, 1e-10);
    REQUIRE(a.unique);
    REQUIRE(b.unique);
    CHECK(a.residual < 1e-13);
    CHECK(b.residual < 1e-13);
    check_same_direction(a.vector, b.vector, 1e-12);
}

TEST_CASE("rank-deficient systems report a non-unique kernel") {
    const MatrixRows rows = {{1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}};
    const auto a = svd_kernel(rows, 1e-10);
    const auto b = lu_kernel(rows, 1e-10);
    CHECK_FALSE(a.unique);
    CHECK_FALSE(b.unique);
    CHECK(a.gap < 1e-10);
}

TEST_CASE("empty system means the whole line is the kernel") {
    const auto k = svd_kernel({}, 1e-10);
    REQUIRE(k.vector.size() == 1);
    CHECK(k.vector[0] == 1.0);
    CHECK(k.unique);
}

TEST_CASE("dense solve recovers a known solution") {
    const MatrixRows a = {{2.0, 1.0}, {1.0, 3.0}};
    const auto x = solve_dense(a, {5.0, 10.0});
    REQUIRE(x.size() == 2);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("dense solve reports singular matrices with an empty result") {
    const MatrixRows a = {{1.0, 2.0}, {2.0, 4.0}};
    CHECK(solve_dense(a, {1.0, 2.0}).empty());
}

TEST_CASE("pivot columns skip dependent columns") {
    // column 2 = column 0 + column 1
    const MatrixRows rows = {{1.0, 0.0, 1.0}, {0.0, 1.0, 1.0}, {1.0, 1.0, 2.0}};
    const auto two = pivot_columns(rows, 2, 1e-10);
    REQUIRE(two.size() == 2);
    CHECK(two[0] < two[1]);
    const auto three = pivot_columns(rows, 3, 1e-10);
    CHECK(three.size() == 2);  // rank is only 2
}

TEST_CASE("pivot columns on a full-rank tall matrix") {
    const MatrixRows rows = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {2.0, -1.0}};
    const auto cols = pivot_columns(rows, 2, 1e-10);
    REQUIRE(cols.size() == 2);
    CHECK(cols[0] == 0);
    CHECK(cols[1] == 1);
}
