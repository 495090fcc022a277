// test_helpers.hpp — Seeded random matrices and shared fixtures for tests

#pragma once

#include <random>

#include "dforge/channels.hpp"
#include "dforge/ops.hpp"

namespace dforge::testing {

inline Matrix random_matrix(Index rows, Index cols, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            m(i, j) = Complex(dist(rng), dist(rng));
    return m;
}

inline Matrix random_hermitian(Index d, unsigned seed) {
    const Matrix m = random_matrix(d, d, seed);
    return ops::hermitize(m);
}

inline DensityMatrix random_density(Index d, unsigned seed) {
    const Matrix m = random_matrix(d, d, seed);
    Matrix rho = m * m.adjoint();
    rho /= rho.trace();
    return DensityMatrix(std::move(rho));
}

// CPTP channel from `rank` random Kraus operators, normalized so the set is
// complete.
inline KrausSet random_kraus(Index d, Index rank, unsigned seed) {
    std::vector<Matrix> ops_raw;
    Matrix total = Matrix::Zero(d, d);
    for (Index k = 0; k < rank; ++k) {
        ops_raw.push_back(random_matrix(d, d, seed + 101 * unsigned(k)));
        total += ops_raw.back().adjoint() * ops_raw.back();
    }
    // total^{-1/2} via eigendecomposition
    Eigen::SelfAdjointEigenSolver<Matrix> es(total);
    Matrix inv_sqrt = es.eigenvectors() *
                      es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal().toDenseMatrix().cast<Complex>() *
                      es.eigenvectors().adjoint();
    for (auto& m : ops_raw) m = m * inv_sqrt;
    return KrausSet(std::move(ops_raw));
}

} // namespace dforge::testing
