#include <doctest.h>

#include "test_helpers.hpp"

using namespace dforge;
using dforge::testing::random_density;
using dforge::testing::random_hermitian;
using dforge::testing::random_matrix;

TEST_CASE("kron: identity blocks") {
    CHECK(ops::approx_equal(ops::kron(ops::identity(2), ops::identity(2)), ops::identity(4), 0));
}

TEST_CASE("kron: sz ⊗ sy has ±sy diagonal blocks") {
    const Matrix m = ops::kron(ops::sigma_z(), ops::sigma_y());
    CHECK(ops::approx_equal(m.block(0, 0, 2, 2), ops::sigma_y(), 0));
    CHECK(ops::approx_equal(m.block(2, 2, 2, 2), -ops::sigma_y(), 0));
    CHECK(m.block(0, 2, 2, 2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kron: brute-force index identity for rectangular inputs") {
    const Matrix a = random_matrix(2, 3, 11);
    const Matrix b = random_matrix(3, 2, 12);
    const Matrix k = ops::kron(a, b);
    REQUIRE(k.rows() == 6);
    REQUIRE(k.cols() == 6);
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 3; ++j)
            for (Index p = 0; p < 3; ++p)
                for (Index q = 0; q < 2; ++q)
                    CHECK(std::abs(k(i * 3 + p, j * 2 + q) - a(i, j) * b(p, q)) == 0.0);
}

TEST_CASE("partial trace: product state returns the system factor") {
    const Matrix rho = random_density(3, 21).rho;
    Matrix omega = Matrix::Zero(2, 2);
    omega(0, 0) = 1.0;
    CHECK(ops::approx_equal(ops::partial_trace_ancilla(ops::kron(rho, omega), 3, 2), rho, 1e-14));
}

TEST_CASE("partial trace: maximally entangled projector reduces to 1/2 identity") {
    const Matrix bell = omega_projector(2) / 2.0; // normalized Bell state
    CHECK(ops::approx_equal(ops::partial_trace_ancilla(bell, 2, 2), 0.5 * ops::identity(2), 1e-15));
    CHECK(ops::approx_equal(ops::partial_trace_first(bell, 2, 2), 0.5 * ops::identity(2), 1e-15));
}

TEST_CASE("partial trace: brute-force block sum and trace preservation") {
    const Matrix m = random_hermitian(4, 31);
    const Matrix reduced = ops::partial_trace_ancilla(m, 2, 2);
    Matrix expected = Matrix::Zero(2, 2);
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j)
            for (Index k = 0; k < 2; ++k)
                expected(i, j) += m(i * 2 + k, j * 2 + k);
    CHECK(ops::approx_equal(reduced, expected, 0));
    CHECK(std::abs(reduced.trace() - m.trace()) < 1e-14);
    CHECK_THROWS_AS(ops::partial_trace_ancilla(m, 3, 2), ValidationError);
}

TEST_CASE("operator norm: identity, unitary, diagonal") {
    CHECK(ops::operator_norm(ops::identity(5)) == doctest::Approx(1.0));
    CHECK(ops::operator_norm(ops::kron(ops::sigma_z(), ops::sigma_y())) == doctest::Approx(1.0));
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = Complex(0, 4.0);
    CHECK(ops::operator_norm(d) == doctest::Approx(4.0));
}

TEST_CASE("trace distance: fixed points") {
    const DensityMatrix rho = random_density(2, 41);
    CHECK(ops::trace_distance(rho.rho, rho.rho) == doctest::Approx(0.0));

    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    CHECK(ops::trace_distance(p0, p1) == doctest::Approx(1.0));

    Matrix plus = Matrix::Constant(2, 2, Complex(0.5, 0.0));
    CHECK(ops::trace_distance(p0, plus) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("trace distance: symmetry, triangle inequality, unitary invariance") {
    for (unsigned seed = 0; seed < 20; ++seed) {
        const Matrix a = random_density(3, 100 + seed).rho;
        const Matrix b = random_density(3, 200 + seed).rho;
        const Matrix c = random_density(3, 300 + seed).rho;
        const double dab = ops::trace_distance(a, b);
        CHECK(dab == doctest::Approx(ops::trace_distance(b, a)));
        CHECK(dab <= ops::trace_distance(a, c) + ops::trace_distance(c, b) + 1e-12);
        CHECK(dab <= 1.0 + 1e-12);
        const Matrix u = ops::expi_hermitian(random_hermitian(3, 400 + seed), 0.7);
        CHECK(ops::trace_distance(u * a * u.adjoint(), u * b * u.adjoint()) ==
              doctest::Approx(dab).epsilon(1e-10));
    }
}

TEST_CASE("vectorization convention: column stacking") {
    const Matrix x = random_matrix(3, 3, 51);
    const Vector v = ops::vec(x);
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j)
            CHECK(v(j * 3 + i) == x(i, j));
    CHECK(ops::approx_equal(ops::unvec(v, 3, 3), x, 0));
    // vec(A X B) = (B^T ⊗ A) vec(X)
    const Matrix a = random_matrix(3, 3, 52), b = random_matrix(3, 3, 53);
    CHECK((ops::vec(a * x * b) - ops::kron(b.transpose(), a) * v).norm() < 1e-12);
}

TEST_CASE("hermitize and residual") {
    const Matrix m = random_matrix(4, 4, 61);
    const Matrix h = ops::hermitize(m);
    CHECK(ops::hermiticity_residual(h) < 1e-15);
    CHECK(ops::hermiticity_residual(m) > 0.1); // generic matrix is far from Hermitian
}

TEST_CASE("expi_hermitian matches the 2x2 phase form") {
    const Matrix u = ops::expi_hermitian(ops::sigma_z(), 0.3);
    CHECK(std::abs(u(0, 0) - std::exp(Complex(0, -0.3))) < 1e-15);
    CHECK(std::abs(u(1, 1) - std::exp(Complex(0, 0.3))) < 1e-15);
    CHECK(std::abs(u(0, 1)) < 1e-15);
    const Matrix h = random_hermitian(4, 62);
    const Matrix w = ops::expi_hermitian(h, 1.1);
    CHECK(ops::operator_norm(w * w.adjoint() - ops::identity(4)) < 1e-13);
}

TEST_CASE("polar projection returns the closest unitary") {
    const Matrix u0 = ops::expi_hermitian(random_hermitian(3, 71), 0.9);
    const Matrix u = ops::polar_unitary(u0 + 1e-3 * random_matrix(3, 3, 72));
    CHECK(ops::operator_norm(u * u.adjoint() - ops::identity(3)) < 1e-13);
    CHECK(ops::operator_norm(u - u0) < 5e-3);
}

TEST_CASE("hermitian basis spans and is orthogonal") {
    const auto basis = ops::hermitian_basis(3);
    CHECK(basis.size() == 9);
    for (const auto& b : basis) CHECK(ops::hermiticity_residual(b) < 1e-15);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j)
            CHECK(std::abs((basis[i].adjoint() * basis[j]).trace()) < 1e-14);
}
