// dilation.cpp — Kraus extraction, smooth completion, Hamiltonian extraction

#include "dforge/dilation.hpp"

#include <cmath>
#include <string>

namespace dforge {

KrausFamily kraus_from_eigentrack(const EigenTrack& track, double completeness_tol) {
    KrausFamily family;
    family.grid = track.grid;
    family.dim = track.dim;
    family.rank = track.rank;
    const Index d = track.dim;
    family.kraus.reserve(track.eigenvalues.size());
    for (Index i = 0; i < Index(track.eigenvalues.size()); ++i) {
        std::vector<Matrix> at_t;
        at_t.reserve(track.rank);
        Matrix completeness = Matrix::Zero(d, d);
        for (Index k = 0; k < track.rank; ++k) {
            double lam = track.eigenvalues[i](k);
            if (lam < 0.0) {
                if (lam < -completeness_tol)
                    throw NumericalError("kraus_from_eigentrack: eigenvalue " + std::to_string(lam) +
                                         " below -tol at grid point " + std::to_string(i));
                lam = 0.0; // integration noise
            }
            Matrix mk = std::sqrt(lam) * ops::unvec(track.eigenvectors[i].col(k), d, d);
            completeness += mk.adjoint() * mk;
            at_t.push_back(std::move(mk));
        }
        const double resid = ops::operator_norm(completeness - Matrix::Identity(d, d));
        family.max_completeness_residual = std::max(family.max_completeness_residual, resid);
        if (resid > completeness_tol)
            throw NumericalError("kraus_from_eigentrack: completeness residual " +
                                 std::to_string(resid) + " at grid point " + std::to_string(i) +
                                 " signals a tracking failure");
        family.kraus.push_back(std::move(at_t));
    }
    return family;
}

namespace {

// Constrained column (j, 0_B): sum_{i,k} M_k(i,j) |i,k>.
Vector constrained_column(const std::vector<Matrix>& kraus, Index d, Index r, Index j) {
    Vector v = Vector::Zero(d * r);
    for (Index k = 0; k < r; ++k)
        for (Index i = 0; i < d; ++i)
            v(i * r + k) += kraus[k](i, j);
    return v;
}

} // namespace

double DilationPath::unitarity_residual(Index i) const {
    const Matrix& u = unitaries[i];
    return ops::operator_norm(u * u.adjoint() - Matrix::Identity(u.rows(), u.cols()));
}

double DilationPath::column_constraint_residual(Index i, const std::vector<Matrix>& kraus_at_i) const {
    const Matrix& u = unitaries[i];
    double worst = 0.0;
    for (Index k = 0; k < rank; ++k) {
        Matrix block(dim, dim);
        for (Index row = 0; row < dim; ++row)
            for (Index col = 0; col < dim; ++col)
                block(row, col) = u(row * rank + k, col * rank + 0);
        worst = std::max(worst, ops::operator_norm(block - kraus_at_i[k]));
    }
    return worst;
}

Matrix DilationPath::reduced_state(Index i, const Matrix& rho0) const {
    Matrix omega = Matrix::Zero(rank, rank);
    omega(0, 0) = 1.0;
    const Matrix joint = unitaries[i] * ops::kron(rho0, omega) * unitaries[i].adjoint();
    return ops::partial_trace_ancilla(joint, dim, rank);
}

DilationPath complete_unitary(const KrausFamily& kraus, const CompletionOptions& options) {
    const Index d = kraus.dim, r = kraus.rank, n = d * r;
    if (d < 1 || r < 1) throw ValidationError("complete_unitary: empty Kraus family");

    Matrix seed = options.seed_basis;
    if (seed.size() == 0) seed = Matrix::Identity(n, n);
    if (seed.rows() != n || seed.cols() < n)
        throw ValidationError("complete_unitary: seed basis must have d*R independent columns");

    DilationPath path;
    path.grid = kraus.grid;
    path.dim = d;
    path.rank = r;
    path.unitaries.reserve(kraus.kraus.size());
    path.completion_step_norms.assign(kraus.kraus.size(), 0.0);

    const Index n_completion = n - d;
    Matrix completion(n, n_completion);

    for (Index step = 0; step < Index(kraus.kraus.size()); ++step) {
        Matrix constrained(n, d);
        for (Index j = 0; j < d; ++j)
            constrained.col(j) = constrained_column(kraus.kraus[step], d, r, j);

        Matrix updated(n, n_completion);
        double max_step_norm = 0.0;
        for (Index c = 0; c < n_completion; ++c) {
            Vector v;
            if (step == 0) {
                // seed scan: next seed column with enough residual after projection
                bool found = false;
                for (Index s = 0; s < seed.cols() && !found; ++s) {
                    Vector cand = seed.col(s);
                    for (Index j = 0; j < d; ++j)
                        cand -= (constrained.col(j).adjoint() * cand)(0) * constrained.col(j);
                    for (Index p = 0; p < c; ++p)
                        cand -= (updated.col(p).adjoint() * cand)(0) * updated.col(p);
                    if (cand.norm() > 0.5) { // canonical seeds keep O(1) residuals
                        v = cand / cand.norm();
                        found = true;
                    }
                }
                if (!found)
                    throw NumericalError("complete_unitary: could not seed completion column " +
                                         std::to_string(c));
            } else {
                v = completion.col(c);
                for (Index j = 0; j < d; ++j)
                    v -= (constrained.col(j).adjoint() * v)(0) * constrained.col(j);
                for (Index p = 0; p < c; ++p)
                    v -= (updated.col(p).adjoint() * v)(0) * updated.col(p);
                const double norm = v.norm();
                if (norm < options.breakdown_floor)
                    throw NumericalError(
                        "complete_unitary: Gram-Schmidt breakdown (norm " + std::to_string(norm) +
                        ") at grid point " + std::to_string(step) + ", completion column " +
                        std::to_string(c) + "; grid too coarse or rank discontinuity");
                v /= norm;
                // second orthogonalization pass against accumulated roundoff
                for (Index j = 0; j < d; ++j)
                    v -= (constrained.col(j).adjoint() * v)(0) * constrained.col(j);
                for (Index p = 0; p < c; ++p)
                    v -= (updated.col(p).adjoint() * v)(0) * updated.col(p);
                v /= v.norm();
                max_step_norm = std::max(max_step_norm, (v - completion.col(c)).norm());
            }
            updated.col(c) = v;
        }
        completion = updated;
        if (step > 0) path.completion_step_norms[step] = max_step_norm;

        // columns (j, 0_B) are constrained; the rest take the completion in slot order
        Matrix u(n, n);
        Index next = 0;
        for (Index j = 0; j < d; ++j)
            for (Index k = 0; k < r; ++k)
                u.col(j * r + k) = (k == 0) ? constrained.col(j) : completion.col(next++);
        path.unitaries.push_back(std::move(u));
    }
    return path;
}

void hamiltonian_from_unitary(DilationPath& path, const HamiltonianOptions& options) {
    const Index n_points = Index(path.unitaries.size());
    if (n_points < 3) throw ValidationError("hamiltonian_from_unitary: need at least 3 points");
    const double dt = path.grid.dt();
    path.hamiltonians.assign(n_points, Matrix());
    path.antiherm_residuals.assign(n_points, 0.0);
    path.h_valid_from = options.divergent_at_start ? 1 : 0;

    for (Index i = 0; i < n_points; ++i) {
        Matrix du;
        if (i == 0)
            du = (-3.0 * path.unitaries[0] + 4.0 * path.unitaries[1] - path.unitaries[2]) / (2.0 * dt);
        else if (i == n_points - 1)
            du = (3.0 * path.unitaries[i] - 4.0 * path.unitaries[i - 1] + path.unitaries[i - 2]) /
                 (2.0 * dt);
        else
            du = (path.unitaries[i + 1] - path.unitaries[i - 1]) / (2.0 * dt);
        const Matrix h_raw = Complex(0, 1) * du * path.unitaries[i].adjoint();
        path.antiherm_residuals[i] = ops::hermiticity_residual(h_raw); // what Hermitization discards
        path.hamiltonians[i] = ops::hermitize(h_raw);
    }
}

PipelineResult dilate(const ChannelFamily& family, const EigentrackOptions& track_options,
                      const CompletionOptions& completion_options) {
    PipelineResult out;
    out.choi = choi_path(family);
    out.track = eigentrack(out.choi, family.grid, track_options);
    out.kraus = kraus_from_eigentrack(out.track);
    out.dilation = complete_unitary(out.kraus, completion_options);
    return out;
}

} // namespace dforge
