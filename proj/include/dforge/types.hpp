// types.hpp — Thin domain wrappers over dense complex matrices

#pragma once

#include <vector>

#include "dforge/common.hpp"
#include "dforge/ops.hpp"

namespace dforge {

// d x d state: Hermitian, unit trace, PSD (each to tol).
struct DensityMatrix {
    Matrix rho;

    DensityMatrix() = default;
    explicit DensityMatrix(Matrix m) : rho(std::move(m)) {}

    Index dim() const { return rho.rows(); }
    bool is_valid(double tol = kDefaultTol) const;
    // Throws ValidationError if invalid.
    static DensityMatrix validated(Matrix m, double tol = kDefaultTol);
    // |psi><psi| from a (not necessarily normalized) vector.
    static DensityMatrix pure(const Vector& psi);
};

// d^2 x d^2 matrix acting on column-vectorized d x d operators.
struct SuperoperatorMatrix {
    Matrix m;

    SuperoperatorMatrix() = default;
    explicit SuperoperatorMatrix(Matrix s);

    Index dim() const;      // d
    Index dim_sq() const { return m.rows(); }
};

// Unnormalized Choi matrix (trace d for trace-preserving maps); the channel
// output lives on the second tensor factor, input on the first.
struct ChoiMatrix {
    Matrix m;

    ChoiMatrix() = default;
    explicit ChoiMatrix(Matrix c);

    Index dim() const;
};

// Kraus operators {M_k}, k = 1..R <= d^2, with sum_k M_k† M_k = 1.
struct KrausSet {
    std::vector<Matrix> ops;

    KrausSet() = default;
    explicit KrausSet(std::vector<Matrix> k) : ops(std::move(k)) {}

    Index rank() const { return static_cast<Index>(ops.size()); }
    Index dim() const { return ops.empty() ? 0 : ops.front().rows(); }
    // ||sum M†M - 1|| (operator norm).
    double completeness_residual() const;
};

} // namespace dforge
