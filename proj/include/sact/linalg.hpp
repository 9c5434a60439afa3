#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sact/error.hpp"

namespace sact {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
/// Sweeps stop once the off-diagonal Frobenius norm is below tol * ||A||_F.
inline Vector jacobi_eigenvalues(Matrix a, double tol = 1e-12, int max_sweeps = 100) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw InvalidArgument("Jacobi eigensolver needs a square matrix");
    const double scale = a.norm();
    auto off = [&] {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };
    for (int sweep = 0; sweep < max_sweeps && scale > 0.0; ++sweep) {
        if (off() <= tol * scale) break;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    Vector ev = a.diagonal();
    std::sort(ev.data(), ev.data() + ev.size());
    return ev;
}

/// Singular values, descending.
inline Vector singular_values(const Matrix& m) {
    if (m.size() == 0) return Vector();
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues();
}

/// Indices of `count` rows of `m` chosen greedily for volume: column-pivoted
/// Householder QR of m^T picks, at each step, the row with the largest
/// component orthogonal to the rows already taken.
inline std::vector<Eigen::Index> greedy_volume_rows(const Matrix& m, Eigen::Index count) {
    if (m.rows() < count) throw InvalidArgument("fewer candidate rows than requested");
    Eigen::ColPivHouseholderQR<Matrix> qr(m.transpose());
    const auto& perm = qr.colsPermutation().indices();
    std::vector<Eigen::Index> rows(perm.data(), perm.data() + count);
    return rows;
}

struct CholeskyResult {
    bool ok = false;
    /// Index of the first pivot that failed, or -1.
    Eigen::Index failed_at = -1;
    double min_pivot = 0.0;
};

/// Plain Cholesky of a symmetric matrix. A pivot counts as failed when it is
/// not above rel_tol times the largest diagonal entry.
inline CholeskyResult cholesky_check(const Matrix& a, double rel_tol = 1e-14) {
    const Eigen::Index n = a.rows();
    CholeskyResult r;
    const double dmax = n > 0 ? a.diagonal().cwiseAbs().maxCoeff() : 0.0;
    if (!(dmax > 0.0)) return r;
    Matrix l = Matrix::Zero(n, n);
    r.min_pivot = INFINITY;
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = a(j, j);
        for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        r.min_pivot = std::min(r.min_pivot, d);
        if (!(d > rel_tol * dmax)) {
            r.failed_at = j;
            return r;
        }
        l(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    r.ok = true;
    return r;
}

/// Solution of a x = b by partial-pivoting LU plus one refinement pass with
/// the residual accumulated in long double.
inline Vector lu_solve_refined(const Matrix& a, const Vector& b) {
    Eigen::PartialPivLU<Matrix> lu(a);
    Vector x = lu.solve(b);
    Vector r(b.size());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        long double s = b(i);
        for (Eigen::Index j = 0; j < a.cols(); ++j) s -= static_cast<long double>(a(i, j)) * x(j);
        r(i) = static_cast<double>(s);
    }
    x += lu.solve(r);
    return x;
}

} // namespace sact
