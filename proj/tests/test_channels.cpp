#include <doctest.h>

#include "test_helpers.hpp"

using namespace dforge;
using dforge::testing::random_density;
using dforge::testing::random_kraus;
using dforge::testing::random_matrix;

namespace {

// superoperator of rho -> u rho u†
Matrix conjugation_superop(const Matrix& u) { return ops::kron(u.conjugate(), u); }

} // namespace

TEST_CASE("reshuffle: identity superoperator gives the entangled projector") {
    const ChoiMatrix choi = reshuffle(SuperoperatorMatrix(ops::identity(4)));
    CHECK(ops::approx_equal(choi.m, omega_projector(2), 1e-15));
    CHECK(std::abs(choi.m.trace() - Complex(2.0)) < 1e-14);
}

TEST_CASE("reshuffle: sx conjugation gives the rotated pure projector") {
    const Matrix s = conjugation_superop(ops::sigma_x());
    const Vector w = ops::kron(ops::sigma_x(), ops::identity(2)) * omega_vector(2);
    CHECK(ops::approx_equal(reshuffle_matrix(s), w * w.adjoint(), 1e-15));
}

TEST_CASE("reshuffle: involution on random matrices") {
    for (unsigned seed : {1u, 2u, 3u}) {
        const Matrix s = random_matrix(9, 9, 500 + seed);
        CHECK(ops::approx_equal(reshuffle_matrix(reshuffle_matrix(s)), s, 0));
    }
    // linear bijection: reshuffle of a sum is the sum of reshuffles
    const Matrix a = random_matrix(4, 4, 600), b = random_matrix(4, 4, 601);
    CHECK(ops::approx_equal(reshuffle_matrix(a + 2.0 * b),
                            reshuffle_matrix(a) + 2.0 * reshuffle_matrix(b), 1e-14));
}

TEST_CASE("kraus_to_superop: identity set") {
    const SuperoperatorMatrix s = kraus_to_superop(KrausSet({ops::identity(2)}));
    CHECK(ops::approx_equal(s.m, ops::identity(4), 1e-15));
}

TEST_CASE("kraus_to_superop: phase flip scales coherences by 1 - 2p") {
    const double p = 0.3;
    const KrausSet kraus({std::sqrt(1 - p) * ops::identity(2), std::sqrt(p) * ops::sigma_z()});
    CHECK(kraus.completeness_residual() < 1e-15);
    const SuperoperatorMatrix s = kraus_to_superop(kraus);
    Matrix rho = random_density(2, 71).rho;
    const Matrix out = apply_channel(s, rho);
    CHECK(std::abs(out(0, 1) - (1 - 2 * p) * rho(0, 1)) < 1e-14);
    CHECK(std::abs(out(0, 0) - rho(0, 0)) < 1e-14);
}

TEST_CASE("kraus round trip through the Choi eigendecomposition") {
    for (unsigned seed : {10u, 20u}) {
        const KrausSet kraus = random_kraus(3, 4, seed);
        const SuperoperatorMatrix s = kraus_to_superop(kraus);
        const KrausSet back = kraus_from_choi(reshuffle(s));
        CHECK(back.completeness_residual() < 1e-12);
        const SuperoperatorMatrix s2 = kraus_to_superop(back);
        CHECK(ops::approx_equal(s.m, s2.m, 1e-12)); // same channel, entrywise
    }
}

TEST_CASE("validate_cptp: identity channel") {
    const auto report = validate_cptp(SuperoperatorMatrix(ops::identity(4)));
    CHECK(report.is_cp);
    CHECK(report.is_tp);
    CHECK(report.min_choi_eigenvalue == doctest::Approx(0.0));
    CHECK(report.tp_residual < 1e-15);
}

TEST_CASE("validate_cptp: transpose map is trace preserving but not CP") {
    // under column stacking the transpose map is the swap matrix
    Matrix swap = Matrix::Zero(4, 4);
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j)
            swap(i * 2 + j, j * 2 + i) = 1.0;
    const Matrix x = random_matrix(2, 2, 81);
    CHECK(ops::approx_equal(ops::unvec(Vector(swap * ops::vec(x)), 2, 2), x.transpose(), 1e-15));
    const auto report = validate_cptp(SuperoperatorMatrix(swap));
    CHECK(!report.is_cp);
    CHECK(report.min_choi_eigenvalue == doctest::Approx(-1.0));
    CHECK(report.is_tp);
}

TEST_CASE("validate_cptp: random Kraus channels are CPTP") {
    for (unsigned seed : {5u, 6u, 7u}) {
        const auto report = validate_cptp(kraus_to_superop(random_kraus(2, 3, seed)));
        CHECK(report.is_cp);
        CHECK(report.is_tp);
    }
}

TEST_CASE("density matrix validation") {
    CHECK(random_density(3, 91).is_valid());
    Matrix bad = random_density(3, 92).rho;
    bad(0, 1) += 0.2; // breaks Hermiticity
    CHECK_THROWS_AS(DensityMatrix::validated(bad), ValidationError);
    CHECK(DensityMatrix::pure((Vector(2) << 1, 1).finished()).is_valid());
}
