#include "bernstein/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace bernstein {

namespace {

Eigen::MatrixXd to_eigen(const MatrixRows& rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows.empty() ? 0 : rows.front().size());
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) {
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return m;
}

double kernel_row_residual(const Eigen::MatrixXd& m, const Eigen::VectorXd& v) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double row_norm = m.row(i).norm();
        if (row_norm == 0.0) continue;
        worst = std::max(worst, std::abs(m.row(i).dot(v)) / row_norm);
    }
    return worst;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

// Scale every row to unit norm. The kernel is unchanged, but confluent
// collocation rows mix wildly different derivative magnitudes and would
// otherwise drown the rank decision in pure row scaling.
void equilibrate_rows(Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double norm = m.row(i).norm();
        if (norm > 0.0) m.row(i) /= norm;
    }
}

}  // namespace

KernelResult svd_kernel(const MatrixRows& rows, double rank_tol) {
    KernelResult result;
    if (rows.empty()) {
        // 0 x 1 system: the kernel is all of R^1.
        result.vector = {1.0};
        result.unique = true;
        result.gap = 1.0;
        return result;
    }
    Eigen::MatrixXd m = to_eigen(rows);
    equilibrate_rows(m);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double largest = sv(0);
    const double smallest = sv(sv.size() - 1);
    result.gap = (largest == 0.0) ? 0.0 : smallest / largest;
    result.unique = largest > 0.0 && smallest > rank_tol * largest;
    const Eigen::VectorXd v = svd.matrixV().col(m.cols() - 1);
    result.vector = to_std(v);
    result.residual = kernel_row_residual(m, v);
    return result;
}

KernelResult lu_kernel(const MatrixRows& rows, double rank_tol) {
    KernelResult result;
    if (rows.empty()) {
        result.vector = {1.0};
        result.unique = true;
        result.gap = 1.0;
        return result;
    }
    Eigen::MatrixXd m = to_eigen(rows);
    equilibrate_rows(m);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(rank_tol);
    result.unique = lu.rank() == m.rows();
    const Eigen::MatrixXd kernel = lu.kernel();
    if (kernel.cols() >= 1) {
        Eigen::VectorXd v = kernel.col(0);
        const double norm = v.norm();
        if (norm > 0.0) v /= norm;
        result.vector = to_std(v);
        result.residual = kernel_row_residual(m, v);
    }
    // Report the same rank diagnostic scale as the SVD route.
    const Eigen::VectorXd diag = lu.matrixLU().diagonal().cwiseAbs();
    const double largest = diag.maxCoeff();
    const double smallest = diag.head(m.rows()).minCoeff();
    result.gap = (largest == 0.0) ? 0.0 : smallest / largest;
    return result;
}

std::vector<double> solve_dense(const MatrixRows& a, const std::vector<double>& rhs) {
    const Eigen::MatrixXd m = to_eigen(a);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rhs.size()));
    for (std::size_t i = 0; i < rhs.size(); ++i) b(static_cast<Eigen::Index>(i)) = rhs[i];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (!lu.isInvertible()) return {};
    return to_std(lu.solve(b));
}

std::vector<std::size_t> pivot_columns(const MatrixRows& rows, std::size_t want,
                                       double rank_tol) {
    const Eigen::MatrixXd m = to_eigen(rows);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    qr.setThreshold(rank_tol);
    const auto rank = static_cast<std::size_t>(qr.rank());
    const auto& perm = qr.colsPermutation().indices();
    std::vector<std::size_t> chosen;
    const std::size_t take = std::min(want, rank);
    chosen.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        chosen.push_back(static_cast<std::size_t>(perm(static_cast<Eigen::Index>(i))));
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

}  // namespace bernstein
