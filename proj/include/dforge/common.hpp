// common.hpp — Shared aliases, default tolerances, error types

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dforge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Default tolerance for validity checks (Hermiticity, trace, PSD, unitarity).
inline constexpr double kDefaultTol = 1e-9;

// Bad inputs, schema violations, precondition failures. CLI exit code 2.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical tolerance was exceeded (too-coarse grid, tracking failure,
// Gram-Schmidt breakdown, trace drift). CLI exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dforge
