#ifndef PARMVAL_LINALG_HPP
#define PARMVAL_LINALG_HPP

// Dense interval matrices plus the float/interval bridge (Eigen does the
// non-rigorous numerics; results are promoted to degenerate intervals).

#include <vector>

#include <Eigen/Dense>

#include "interval.hpp"

namespace parmval {

using iv_vector = std::vector<interval>;

struct iv_matrix {
    int rows = 0, cols = 0;
    std::vector<interval> d;

    iv_matrix() = default;
    iv_matrix(int r, int c) : rows(r), cols(c), d(static_cast<std::size_t>(r) * c) {}

    interval& at(int i, int j) { return d[static_cast<std::size_t>(i) * cols + j]; }
    const interval& at(int i, int j) const { return d[static_cast<std::size_t>(i) * cols + j]; }

    static iv_matrix identity(int n) {
        iv_matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = interval(1.0);
        return m;
    }
};

inline iv_matrix operator*(const iv_matrix& A, const iv_matrix& B) {
    if (A.cols != B.rows) throw interval_error("iv_matrix product: shape mismatch");
    iv_matrix C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const interval& a = A.at(i, k);
            if (a.lo() == 0.0 && a.hi() == 0.0) continue;
            for (int j = 0; j < B.cols; ++j) C.at(i, j) += a * B.at(k, j);
        }
    return C;
}

inline iv_matrix operator-(const iv_matrix& A, const iv_matrix& B) {
    if (A.rows != B.rows || A.cols != B.cols) throw interval_error("iv_matrix sub: shape mismatch");
    iv_matrix C(A.rows, A.cols);
    for (std::size_t i = 0; i < C.d.size(); ++i) C.d[i] = A.d[i] - B.d[i];
    return C;
}

inline iv_matrix operator+(const iv_matrix& A, const iv_matrix& B) {
    if (A.rows != B.rows || A.cols != B.cols) throw interval_error("iv_matrix add: shape mismatch");
    iv_matrix C(A.rows, A.cols);
    for (std::size_t i = 0; i < C.d.size(); ++i) C.d[i] = A.d[i] + B.d[i];
    return C;
}

inline iv_vector operator*(const iv_matrix& A, const iv_vector& x) {
    if (A.cols != static_cast<int>(x.size())) throw interval_error("iv_matrix apply: shape mismatch");
    iv_vector y(A.rows);
    for (int i = 0; i < A.rows; ++i) {
        interval s(0.0);
        for (int j = 0; j < A.cols; ++j) s += A.at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

// max over columns j of w_j^-1 * sum_i w_i |T_ij|
inline interval weighted_op_norm(const iv_matrix& T, const iv_vector& w) {
    if (T.rows != static_cast<int>(w.size()) || T.cols != T.rows)
        throw interval_error("weighted_op_norm: shape mismatch");
    interval best(0.0);
    for (int j = 0; j < T.cols; ++j) {
        interval s(0.0);
        for (int i = 0; i < T.rows; ++i) s += w[i] * mag(T.at(i, j));
        interval col = s / w[j];
        best = interval(std::max(best.lo(), col.lo()), std::max(best.hi(), col.hi()));
    }
    return best;
}

inline Eigen::MatrixXd midpoint(const iv_matrix& A) {
    Eigen::MatrixXd M(A.rows, A.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) M(i, j) = A.at(i, j).mid();
    return M;
}

inline iv_matrix promote(const Eigen::MatrixXd& M) {
    iv_matrix A(static_cast<int>(M.rows()), static_cast<int>(M.cols()));
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) A.at(i, j) = interval(M(i, j));
    return A;
}

// float inverse promoted to degenerate intervals (approximate inverse for
// the contraction maps; rigor comes from the residual bounds, not from it)
inline iv_matrix approx_inverse(const iv_matrix& A) {
    Eigen::MatrixXd M = midpoint(A);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    if (lu.determinant() == 0.0) throw interval_error("approx_inverse: singular block");
    return promote(lu.inverse());
}

} // namespace parmval

#endif
