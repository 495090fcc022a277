// transforms.hpp — Building new dilations from existing ones: frame changes,
// commuting composition, first-order perturbation, time rescaling, and
// independent multi-qubit assembly

#pragma once

#include "dforge/simulate.hpp"

namespace dforge {

// Constant-Hamiltonian frame U0(t) = exp(-i H0 t) on the system factor.
struct FrameSpec {
    Matrix h0; // Hermitian, d x d

    Matrix unitary_at(double t) const; // exp(-i h0 t)
};

// U_AB = (U0 ⊗ 1) Ũ_AB,  H_AB = H0⊗1 + (U0⊗1) H̃_AB (U0†⊗1).
// The reduced dynamics become U0 ε̃(.) U0†.
DilationPath frame_change(const FrameSpec& frame, const DilationPath& tilde);

// Numerical commutativity check: max over sampled points of
// ||E1(t) E2(t) - E2(t) E1(t)||.
double commutator_defect(const ChannelFamily& a, const ChannelFamily& b);

// For channels that commute at all times: combined unitary U1_AC U2_AB on
// A ⊗ B ⊗ C (ancilla B ⊗ C, initial |0><0| ⊗ |0><0|), Hamiltonian
// H1_AC + U1_AC H2_AB U1_AC†. When families are supplied the commutativity is
// checked numerically to `tol` first.
DilationPath compose_commuting(const DilationPath& d1, const DilationPath& d2,
                               const ChannelFamily* family1 = nullptr,
                               const ChannelFamily* family2 = nullptr, double tol = 1e-8);

struct PerturbationSpec {
    LindbladSpec base;         // L0
    LindbladSpec perturbation; // L1 (same dimension; entered with strength delta)
    double delta = 0.0;
};

struct PerturbedChannel {
    ChannelFamily base;              // E0(t)
    std::vector<Matrix> first_order; // E1(t): E(t) = E0 + delta E1 + O(delta^2)
};

// First-order response of the time-ordered propagator: trapezoidal panels of
// the two-time sandwich E0_(t,tau) L1(tau) E0_(tau,0), accumulated with
// forward-propagated step propagators.
PerturbedChannel perturbative_channel(const PerturbationSpec& spec, const TimeGrid& grid);

struct FirstOrderKraus {
    TimeGrid grid;
    Index dim = 0;
    Index rank = 0;
    std::vector<std::vector<Matrix>> kraus1; // per point: R corrections
    double max_kernel_rate = 0.0; // largest first-order eigenvalue seen on zero modes
};

// First-order eigen-perturbation of the Choi path around a tracked base:
// within numerically degenerate base groups the correction block is
// diagonalized; a nonzero first-order rate on a zero eigenvalue means the
// Kraus rank changes, which this construction rejects (the sqrt(delta)
// branch is out of scope).
FirstOrderKraus kraus_first_order(const EigenTrack& base, const std::vector<Matrix>& choi1,
                                  double degeneracy_tol = 1e-8, double rank_change_tol = 1e-6);

// Minimum-Frobenius-norm U1 satisfying the constrained columns (first-order
// Kraus) and U1 U0† + U0 U1† = 0, then H1 = (i dU1/dt - H0 U1) U0†,
// Hermitized. Returns the H1 path on the base grid (zero matrices before
// base.h_valid_from).
std::vector<Matrix> perturbative_dilation(const DilationPath& base, const KrausFamily& base_kraus,
                                          const FirstOrderKraus& kraus1);

struct RescaleMap {
    TimeProfile h;   // sampled prefactor (tabulated)
    TimeProfile tau; // tabulated monotone map; 0 at the first valid path point
    double h0 = 1.0;
    Matrix X; // unit operator norm, Hermitian
};

// For H(t) = h(t) X: a constant Hamiltonian h0 X applied for tau(t) =
// (1/h0) int h reproduces U(t) relative to the path start.
RescaleMap rescale_time(const DilationPath& path, double h0, double factor_tol = 1e-8);

// Independent per-qubit dilations on a shared grid. Ordering
// [sys_1..sys_n, anc_1..anc_n]; H(t) = sum_i H_i(t), each term acting on one
// system qubit and its own ancilla block. Hamiltonians are assembled on
// demand to keep the footprint linear in the part sizes.
struct CompositeDilation {
    TimeGrid grid;
    Index n_qubits = 0;
    std::vector<Index> ancilla_dims;
    Index system_dim = 0;  // 2^n
    Index ancilla_dim = 0; // product of ancilla_dims
    Index h_valid_from = 0;
    std::vector<std::vector<Matrix>> part_hamiltonians; // per qubit: per point

    Matrix hamiltonian_at(Index i) const;
};

CompositeDilation tensor_independent(const std::vector<const DilationPath*>& dilations,
                                     Index max_total_dim = 4096);

// View over a composite; the composite must outlive the view.
SampledHamiltonian sampled_hamiltonian(const CompositeDilation& composite);

// Embed an operator acting on factors (i, j) of a product space with the
// given factor dimensions (identity elsewhere).
Matrix embed_two_factor(const Matrix& op, const std::vector<Index>& dims, Index i, Index j);

} // namespace dforge
