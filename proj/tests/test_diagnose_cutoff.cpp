#include <doctest.h>

#include "dforge/diagnose.hpp"
#include "dforge/fixtures.hpp"
#include "dforge/presets.hpp"
#include "dforge/transforms.hpp"

using namespace dforge;

namespace {

const TimeGrid kGrid(0.0, 2.0, 1000);

} // namespace

TEST_CASE("diagnose: constant dephasing diverges at zero") {
    const auto report = diagnose(presets::spin_boson(TimeProfile::constant(1.0)), kGrid);
    CHECK(report.diverges_at_zero);
    CHECK(report.eigenvalue_test);
    CHECK(report.generator_test);
    CHECK(report.tests_agree);
    // the vanishing eigenvalue ramps up at rate 4 gamma
    bool found = false;
    for (const auto& z : report.zero_time_evidence)
        if (std::abs(z.lambda_dot0 - 4.0) < 0.01) found = true;
    CHECK(found);
}

TEST_CASE("diagnose: constant amplitude damping diverges at zero") {
    const auto report = diagnose(presets::amplitude_damping(1.0, 0.7), kGrid);
    CHECK(report.diverges_at_zero);
    CHECK(report.tests_agree);
}

TEST_CASE("diagnose: unitary-only family is regular") {
    const auto report = diagnose(presets::unitary_only(1.0), kGrid);
    CHECK(!report.diverges_at_zero);
    CHECK(report.tests_agree);
    CHECK(report.rank_drop_times.empty());
    CHECK(report.dissipative_generator_norm_at_zero < 1e-10);
}

TEST_CASE("diagnose: vanishing-rate bath stays bounded at zero") {
    const auto gamma = presets::spin_boson_bath_rate(1.2, 1.0);
    const auto report = diagnose(presets::spin_boson(gamma), kGrid);
    CHECK(!report.diverges_at_zero);
    CHECK(!report.eigenvalue_test);
    CHECK(!report.generator_test);
    CHECK(report.tests_agree);
}

TEST_CASE("diagnose: channel-family overload agrees with the generator overload") {
    const auto spec = presets::spin_boson(TimeProfile::constant(0.8));
    const auto family = propagate_channel(spec, kGrid);
    const auto from_family = diagnose(family);
    const auto from_spec = diagnose(spec, kGrid);
    CHECK(from_family.diverges_at_zero == from_spec.diverges_at_zero);
    CHECK(from_family.dissipative_generator_norm_at_zero ==
          doctest::Approx(from_spec.dissipative_generator_norm_at_zero).epsilon(1e-3));
}

TEST_CASE("dissipative remainder: pure commutator generators project to zero") {
    const auto spec = presets::unitary_only(2.0);
    CHECK(dissipative_remainder_norm(lindblad_superop(spec, 0.0), 2) < 1e-12);
    const auto noisy = presets::spin_boson(TimeProfile::constant(0.5));
    CHECK(dissipative_remainder_norm(lindblad_superop(noisy, 0.0), 2) > 0.5);
}

TEST_CASE("diagnose: interior rank drop is recorded") {
    // dephasing-type family with coherence factor q(t) = cos(t): the Choi
    // eigenvalue 1 + q touches zero at t = pi and rises again
    const TimeGrid grid(0.0, 4.5, 900);
    ChannelFamily family;
    family.grid = grid;
    family.dim = 2;
    for (Index i = 0; i < grid.size(); ++i) {
        const double q = std::cos(grid.time(i));
        Matrix s = Matrix::Identity(4, 4);
        s(1, 1) = q;
        s(2, 2) = q;
        family.superops.push_back(s);
    }
    const auto report = diagnose(family);
    REQUIRE(!report.rank_drop_times.empty());
    CHECK(report.rank_drop_times.front().t == doctest::Approx(M_PI).epsilon(0.01));
}

TEST_CASE("split_prefactor detects single-direction paths") {
    const double decay = 1.0;
    const auto fixture = fixtures::DilationFixture::dephasing(decay);
    DilationPath path;
    path.grid = TimeGrid(0.1, 1.0, 100);
    path.dim = 2;
    path.rank = 2;
    for (Index i = 0; i <= 100; ++i) {
        const double t = path.grid.time(i);
        path.unitaries.push_back(fixture.initial_unitary(t));
        path.hamiltonians.push_back(fixture.hamiltonian(t));
    }
    const auto split = split_prefactor(path);
    REQUIRE(split.factorable);
    CHECK(ops::operator_norm(split.X) == doctest::Approx(1.0));
    for (Index i = 0; i <= 100; i += 20)
        CHECK(split.h[i] == doctest::Approx(fixture.prefactor(path.grid.time(i))).epsilon(1e-9));

    // a two-direction path is rejected
    path.hamiltonians[50] += 0.5 * ops::kron(ops::sigma_x(), ops::identity(2));
    CHECK(!split_prefactor(path).factorable);
    CHECK_THROWS_AS(rescale_time(path, 1.0), ValidationError);
}

TEST_CASE("apply_cutoff: infinite cap returns the same path") {
    const auto fixture = fixtures::DilationFixture::dephasing(1.0);
    DilationPath path;
    path.grid = TimeGrid(0.1, 1.0, 50);
    path.dim = 2;
    path.rank = 2;
    for (Index i = 0; i <= 50; ++i) {
        path.unitaries.push_back(fixture.initial_unitary(path.grid.time(i)));
        path.hamiltonians.push_back(fixture.hamiltonian(path.grid.time(i)));
    }
    CutoffPolicy policy{1e12, CutoffPolicy::Mode::kPrefactorClamp};
    const auto result = apply_cutoff(path, policy);
    CHECK(!result.any_clamped);
    for (Index i = 0; i <= 50; i += 10)
        CHECK(ops::approx_equal(result.path.hamiltonians[i], path.hamiltonians[i], 0));

    CutoffPolicy norm_policy{2.0, CutoffPolicy::Mode::kNormClamp};
    const auto clamped = apply_cutoff(path, norm_policy);
    CHECK(clamped.any_clamped);
    for (const auto& h : clamped.path.hamiltonians)
        CHECK(ops::operator_norm(h) < 2.0 + 1e-9);
}

TEST_CASE("clamp window end: bisection agrees with the closed form") {
    const double decay = 1.0, cap = 5.0;
    const auto fixture = fixtures::DilationFixture::dephasing(decay);
    const double found = clamp_window_end(
        [&fixture](double t) { return fixture.prefactor(t); }, cap, 1e-15, 1.0);
    // h(t) = g/(2 sqrt(e^{2 g t}-1)) = C  =>  t = log1p(g^2/(4 C^2)) / (2 g)
    const double expected = std::log1p(decay * decay / (4.0 * cap * cap)) / (2.0 * decay);
    CHECK(found == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("cutoff deviation shrinks with the cap and respects the 1/(8C) scale") {
    const double decay = 1.0;
    const Vector plus = (Vector(2) << 1, 1).finished() / std::sqrt(2.0);
    const DensityMatrix rho0 = DensityMatrix::pure(plus);
    const auto fixture = fixtures::DilationFixture::dephasing(decay);
    double previous = 1e9;
    for (const double cap : {2.0, 5.0, 20.0}) {
        const TimeGrid grid(0.0, 4.0, 40000);
        const auto sim = evolve_dilated(fixture.clamped_fn(cap), 2, 2, rho0, grid);
        double worst = 0.0;
        for (Index i = 0; i < grid.size(); ++i) {
            const double exact = 0.5 * (1.0 + std::exp(-decay * grid.time(i)));
            const double got = (plus.adjoint() * sim.reduced[i] * plus)(0).real();
            worst = std::max(worst, std::abs(got - exact));
        }
        CHECK(worst < previous);
        CHECK(worst < 1.2 * decay / (8.0 * cap));
        previous = worst;
    }
}
