// ops.hpp — Complex matrix primitives: tensor products, partial traces,
// vectorization, norms, and the standard qubit operators

#pragma once

#include <cmath>

#include "dforge/common.hpp"

namespace dforge::ops {

// Column-stacking vectorization, fixed project-wide:
//   vec(X)[j*d + i] = X(i, j),  vec(A X B) = (B^T ⊗ A) vec(X).
template <typename Derived>
Vector vec(const Eigen::MatrixBase<Derived>& x) {
    Matrix m = x;
    return Eigen::Map<const Vector>(m.data(), m.size());
}

inline Matrix unvec(const Vector& v, Index rows, Index cols) {
    if (v.size() != rows * cols) throw ValidationError("unvec: size mismatch");
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

inline Matrix unvec(const Vector& v) {
    const auto d = static_cast<Index>(std::llround(std::sqrt(double(v.size()))));
    if (d * d != v.size()) throw ValidationError("unvec: length is not a perfect square");
    return unvec(v, d, d);
}

// Kronecker product, (i*p+k, j*q+l) = a(i,j) b(k,l) for b of size p x q.
template <typename DA, typename DB>
Matrix kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Tr_B of an operator on A⊗B (index (i,k) = i*dimB + k). Trace preserved.
Matrix partial_trace_ancilla(const Matrix& m, Index dim_a, Index dim_b);
// Tr_A of an operator on A⊗B.
Matrix partial_trace_first(const Matrix& m, Index dim_a, Index dim_b);

Matrix hermitize(const Matrix& m);
double hermiticity_residual(const Matrix& m); // operator norm of the skew part

// Largest singular value.
double operator_norm(const Matrix& m);

// (1/2)||a - b||_1 for Hermitian inputs; in [0,1] for density matrices.
double trace_distance(const Matrix& a, const Matrix& b);

// Entrywise comparison to a tolerance.
inline bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           ((a - b).cwiseAbs().maxCoeff() <= tol);
}

// exp(-i theta X) for Hermitian X, via spectral decomposition.
Matrix expi_hermitian(const Matrix& x, double theta);

// Orthonormal projection of `v` onto the unitary group (polar factor).
Matrix polar_unitary(const Matrix& v);

inline Matrix identity(Index d) { return Matrix::Identity(d, d); }

Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();
Matrix sigma_plus();  // |1><0|
Matrix sigma_minus(); // |0><1|

// Real-coefficient basis of d x d Hermitian matrices (d^2 elements, identity first).
std::vector<Matrix> hermitian_basis(Index d);

} // namespace dforge::ops
