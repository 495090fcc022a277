// ops.cpp — Matrix primitive implementations

#include "dforge/ops.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dforge::ops {

Matrix partial_trace_ancilla(const Matrix& m, Index dim_a, Index dim_b) {
    if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b)
        throw ValidationError("partial_trace_ancilla: dimension mismatch");
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (Index i = 0; i < dim_a; ++i)
        for (Index j = 0; j < dim_a; ++j)
            for (Index k = 0; k < dim_b; ++k)
                out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return out;
}

Matrix partial_trace_first(const Matrix& m, Index dim_a, Index dim_b) {
    if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b)
        throw ValidationError("partial_trace_first: dimension mismatch");
    Matrix out = Matrix::Zero(dim_b, dim_b);
    for (Index k = 0; k < dim_b; ++k)
        for (Index l = 0; l < dim_b; ++l)
            for (Index i = 0; i < dim_a; ++i)
                out(k, l) += m(i * dim_b + k, i * dim_b + l);
    return out;
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double hermiticity_residual(const Matrix& m) {
    return operator_norm(0.5 * (m - m.adjoint()));
}

double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double trace_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(a - b), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Matrix expi_hermitian(const Matrix& x, double theta) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x);
    Vector phases(x.rows());
    for (Index k = 0; k < x.rows(); ++k)
        phases(k) = std::exp(Complex(0.0, -theta * es.eigenvalues()(k)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix polar_unitary(const Matrix& v) {
    Eigen::JacobiSVD<Matrix> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix sigma_plus() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 0) = 1;
    return m;
}

Matrix sigma_minus() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1;
    return m;
}

std::vector<Matrix> hermitian_basis(Index d) {
    std::vector<Matrix> basis;
    basis.push_back(Matrix::Identity(d, d));
    for (Index i = 0; i < d; ++i) {
        for (Index j = i + 1; j < d; ++j) {
            Matrix s = Matrix::Zero(d, d);
            s(i, j) = 1;
            s(j, i) = 1;
            basis.push_back(s);
            Matrix a = Matrix::Zero(d, d);
            a(i, j) = Complex(0, -1);
            a(j, i) = Complex(0, 1);
            basis.push_back(a);
        }
    }
    // diagonal traceless combinations
    for (Index k = 1; k < d; ++k) {
        Matrix g = Matrix::Zero(d, d);
        for (Index i = 0; i < k; ++i) g(i, i) = 1;
        g(k, k) = -double(k);
        basis.push_back(g / std::sqrt(double(k * (k + 1))));
    }
    return basis;
}

} // namespace dforge::ops
