// dilation.hpp — From tracked Choi eigenpairs to a smooth unitary dilation
// and its generating Hamiltonian

#pragma once

#include "dforge/eigentrack.hpp"

namespace dforge {

struct KrausFamily {
    TimeGrid grid;
    Index dim = 0;   // d
    Index rank = 0;  // R
    std::vector<std::vector<Matrix>> kraus; // per point: R operators, d x d
    double max_completeness_residual = 0.0;

    KrausSet at(Index i) const { return KrausSet(kraus[i]); }
};

// M_k(t)(i,j) = sqrt(lambda_k(t)) * v_k(t)[(j,i)] in the fixed vectorization;
// tiny negative eigenvalues are clamped to zero before the square root.
// Completeness beyond `completeness_tol` signals a tracking failure.
KrausFamily kraus_from_eigentrack(const EigenTrack& track, double completeness_tol = 1e-7);

struct DilationPath {
    TimeGrid grid;
    Index dim = 0;   // system dimension d
    Index rank = 0;  // ancilla dimension R; U and H are (d R) x (d R)
    std::vector<Matrix> unitaries;
    std::vector<Matrix> hamiltonians;          // empty until extracted
    Index h_valid_from = 0;                    // first index with a meaningful H
    std::vector<double> antiherm_residuals;    // FD diagnostic, per point
    std::vector<double> completion_step_norms; // max completion-column step per transition

    // index (i, k) = i * rank + k on system ⊗ ancilla
    Index total_dim() const { return dim * rank; }
    double unitarity_residual(Index i) const;
    // ||<k_B| U |0_B> - M_k|| over all k, for the Kraus set at point i.
    double column_constraint_residual(Index i, const std::vector<Matrix>& kraus_at_i) const;

    Matrix reduced_state(Index i, const Matrix& rho0) const; // Tr_B U (rho ⊗ |0><0|) U†
};

struct CompletionOptions {
    Matrix seed_basis;            // columns used to seed the completion; default canonical
    double breakdown_floor = 1e-6; // Gram-Schmidt projection-norm floor
};

// Fill the d constrained columns from the Kraus operators at every grid point
// and carry the remaining d(R-1) columns forward by re-orthonormalization,
// seeding them at t_start from the (canonical) seed basis.
DilationPath complete_unitary(const KrausFamily& kraus, const CompletionOptions& options = {});

struct HamiltonianOptions {
    bool divergent_at_start = false; // skip the first point (one-sided FD would be meaningless)
    double flag_residual = 1e-3;     // per-point non-smoothness flag threshold
};

// H = i U' U† by central finite differences (second-order one-sided at the
// ends), Hermitized; the skew residual is recorded per point.
void hamiltonian_from_unitary(DilationPath& path, const HamiltonianOptions& options = {});

// Convenience pipeline: channel family -> Choi path -> eigentrack -> Kraus ->
// completed unitary (Hamiltonian extraction left to the caller).
struct PipelineResult {
    std::vector<Matrix> choi;
    EigenTrack track;
    KrausFamily kraus;
    DilationPath dilation;
};
PipelineResult dilate(const ChannelFamily& family, const EigentrackOptions& track_options = {},
                      const CompletionOptions& completion_options = {});

} // namespace dforge
