// diagnose.cpp — Divergence classification

#include "dforge/diagnose.hpp"

#include <Eigen/QR>

namespace dforge {

double dissipative_remainder_norm(const Matrix& generator, Index d) {
    // span of rho -> -i[A, rho] over Hermitian A, as real-linear combinations
    const auto basis = ops::hermitian_basis(d);
    const Matrix id = Matrix::Identity(d, d);
    std::vector<Matrix> maps;
    maps.reserve(basis.size());
    for (const auto& a : basis) {
        if (std::abs((a - id * (a.trace() / double(d))).cwiseAbs().maxCoeff()) < 1e-15)
            continue; // identity component generates the zero map
        maps.push_back(Complex(0, -1) * (ops::kron(id, a) - ops::kron(a.transpose(), id)));
    }
    // real least squares: stack Re and Im parts of the vectorized maps
    const Index n = generator.size();
    Eigen::MatrixXd design(2 * n, Index(maps.size()));
    Eigen::VectorXd target(2 * n);
    for (Index c = 0; c < Index(maps.size()); ++c) {
        const Eigen::Map<const Vector> v(maps[c].data(), n);
        design.col(c).head(n) = v.real();
        design.col(c).tail(n) = v.imag();
    }
    const Eigen::Map<const Vector> g(generator.data(), n);
    target.head(n) = g.real();
    target.tail(n) = g.imag();
    const Eigen::VectorXd coeffs = design.colPivHouseholderQr().solve(target);
    Matrix residual = generator;
    for (Index c = 0; c < Index(maps.size()); ++c) residual -= coeffs(c) * maps[c];
    return ops::operator_norm(residual);
}

namespace {

DivergenceReport diagnose_impl(const Matrix& generator_at_zero,
                               const std::vector<RealVector>& lambda_tracks,
                               const TimeGrid& grid, Index d, const DiagnoseOptions& options) {
    DivergenceReport report;
    const double dt = grid.dt();
    const Index rank = lambda_tracks.front().size();

    // (a) one-sided second-order derivative of each eigenvalue track at 0
    for (Index k = 0; k < rank; ++k) {
        const double l0 = lambda_tracks[0](k);
        if (l0 > options.eigenvalue_zero_tol) continue;
        const double l1 = lambda_tracks[1](k), l2 = lambda_tracks[2](k);
        const double ldot = (-3.0 * l0 + 4.0 * l1 - l2) / (2.0 * dt);
        report.zero_time_evidence.push_back({k, l0, ldot});
        if (std::abs(ldot) > options.rate_tol) report.eigenvalue_test = true;
    }

    // (b) dissipative remainder of the generator at t = 0
    report.dissipative_generator_norm_at_zero = dissipative_remainder_norm(generator_at_zero, d);
    const double scale = std::max(1.0, ops::operator_norm(generator_at_zero));
    report.generator_test = report.dissipative_generator_norm_at_zero > options.generator_tol * scale;

    report.tests_agree = (report.eigenvalue_test == report.generator_test);
    report.diverges_at_zero = report.generator_test;

    // (c) interior zeros: a local minimum of a previously-nonzero track whose
    // fitted parabola vertex extrapolates to zero (a grid rarely lands on the
    // touch point itself)
    const double touch_tol = std::max(options.interior_zero_tol, 1e-8 * double(d));
    for (Index k = 0; k < rank; ++k) {
        double peak = 0.0;
        for (Index i = 0; i < grid.size(); ++i) peak = std::max(peak, lambda_tracks[i](k));
        const double rise_gate = std::max(1e-4 * peak, 100.0 * touch_tol);
        bool was_above = false;
        for (Index i = 1; i + 1 < grid.size(); ++i) {
            const double lm = lambda_tracks[i - 1](k);
            const double l0 = lambda_tracks[i](k);
            const double lp = lambda_tracks[i + 1](k);
            if (l0 > rise_gate) {
                was_above = true;
                continue;
            }
            if (!was_above || l0 > lm || l0 > lp) continue;
            const double a = 0.5 * (lp + lm) - l0;
            const double b = 0.5 * (lp - lm);
            double vertex = l0, offset = 0.0;
            if (a > 0.0) {
                offset = -b / (2.0 * a);
                vertex = l0 - b * b / (4.0 * a);
            }
            if (vertex <= touch_tol) {
                report.rank_drop_times.push_back({grid.time(i) + offset * grid.dt(), k});
                was_above = false;
            }
        }
    }
    return report;
}

} // namespace

DivergenceReport diagnose(const LindbladSpec& spec, const TimeGrid& grid,
                          const DiagnoseOptions& options) {
    if (grid.t_start != 0.0)
        throw ValidationError("diagnose: grid must start at t = 0 (identity channel)");
    const ChannelFamily family = propagate_channel(spec, grid);
    const auto choi = choi_path(family);
    EigentrackOptions topts;
    const EigenTrack track = eigentrack(choi, grid, topts);
    return diagnose_impl(lindblad_superop(spec, 0.0), track.eigenvalues, grid, spec.dim, options);
}

DivergenceReport diagnose(const ChannelFamily& family, const DiagnoseOptions& options) {
    const TimeGrid& grid = family.grid;
    if (grid.t_start != 0.0)
        throw ValidationError("diagnose: family must start at t = 0 (identity channel)");
    if (ops::operator_norm(family.superops[0] -
                           Matrix::Identity(family.superops[0].rows(), family.superops[0].cols())) >
        1e-8)
        throw ValidationError("diagnose: family does not start at the identity channel");
    const auto choi = choi_path(family);
    const EigenTrack track = eigentrack(choi, grid);
    // generator at 0 from a one-sided second-order difference of the family
    const double dt = grid.dt();
    const Matrix gen0 = (-3.0 * family.superops[0] + 4.0 * family.superops[1] - family.superops[2]) /
                        (2.0 * dt);
    return diagnose_impl(gen0, track.eigenvalues, grid, family.dim, options);
}

void attach_hamiltonian_norms(DivergenceReport& report, const DilationPath& path) {
    double worst = 0.0;
    for (Index i = path.h_valid_from; i < Index(path.hamiltonians.size()); ++i)
        worst = std::max(worst, ops::operator_norm(path.hamiltonians[i]));
    report.max_h_norm_observed = worst;
}

} // namespace dforge
