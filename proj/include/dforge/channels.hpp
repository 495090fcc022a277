// channels.hpp — Conversions between superoperator, Choi, and Kraus forms,
// plus complete-positivity / trace-preservation validation

#pragma once

#include "dforge/types.hpp"

namespace dforge {

// |Omega> = sum_j |jj>, the unnormalized maximally entangled reference.
Vector omega_vector(Index d);
Matrix omega_projector(Index d); // |Omega><Omega|, trace d

// The reshuffle permutation, fixed project-wide and involutive:
//   R(M)[a*d+b, c*d+e] = M[e*d+b, c*d+a].
// Maps a superoperator to a Choi matrix and back.
Matrix reshuffle_matrix(const Matrix& m);
ChoiMatrix reshuffle(const SuperoperatorMatrix& s);
SuperoperatorMatrix reshuffle(const ChoiMatrix& c);

// S = sum_k conj(M_k) ⊗ M_k under column-stacking vectorization.
SuperoperatorMatrix kraus_to_superop(const KrausSet& kraus);

// Kraus operators from the eigendecomposition of a single Choi matrix,
// keeping eigenvalues above `threshold` (descending order).
KrausSet kraus_from_choi(const ChoiMatrix& choi, double threshold = 1e-10);

// rho -> unvec(S vec(rho)).
Matrix apply_channel(const SuperoperatorMatrix& s, const Matrix& rho);

struct CptpReport {
    bool is_cp = false;
    bool is_tp = false;
    double min_choi_eigenvalue = 0.0; // worst CP violation if negative
    double tp_residual = 0.0;         // ||Tr_out Choi - 1||
    double herm_residual = 0.0;       // skew part of the Choi
};

// CP iff reshuffle(s) is PSD to tol; TP iff the partial trace of the Choi
// over the output factor equals the identity to tol.
CptpReport validate_cptp(const SuperoperatorMatrix& s, double tol = kDefaultTol);

} // namespace dforge
