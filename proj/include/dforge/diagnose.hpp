// diagnose.hpp — Divergence and discontinuity classification for a channel
// family that starts at the identity

#pragma once

#include "dforge/dilation.hpp"

namespace dforge {

struct ZeroTimeEvidence {
    Index track;
    double lambda0;     // eigenvalue at t = 0
    double lambda_dot0; // one-sided derivative at t = 0
};

struct RankDropEvent {
    double t;
    Index track;
};

struct DivergenceReport {
    bool diverges_at_zero = false;
    bool eigenvalue_test = false; // some lambda_k(0) = 0 with lambda_dot != 0
    bool generator_test = false;  // generator at 0 has a dissipative remainder
    bool tests_agree = true;      // false flags the report for manual review
    std::vector<ZeroTimeEvidence> zero_time_evidence;
    double dissipative_generator_norm_at_zero = 0.0;
    std::vector<RankDropEvent> rank_drop_times;
    double max_h_norm_observed = 0.0; // filled when a Hamiltonian path is supplied
};

struct DiagnoseOptions {
    double eigenvalue_zero_tol = 1e-9;  // lambda(0) below this counts as zero
    double rate_tol = 1e-6;             // |lambda_dot(0)| above this counts as nonzero
    double generator_tol = 1e-8;        // dissipative remainder threshold (relative to ||L||)
    double interior_zero_tol = 1e-10;   // rank-drop scan threshold
};

// Runs (a) the one-sided eigenvalue-derivative test, (b) the least-squares
// split of the generator at t = 0 into a commutator part and a dissipative
// remainder, and (c) an interior scan for eigenvalue zeros. Both divergence
// tests are reported and cross-checked.
DivergenceReport diagnose(const LindbladSpec& spec, const TimeGrid& grid,
                          const DiagnoseOptions& options = {});
DivergenceReport diagnose(const ChannelFamily& family, const DiagnoseOptions& options = {});

// Operator norm of L minus its best approximation by rho -> -i[A, rho]
// over Hermitian A (the dissipative remainder of a generator).
double dissipative_remainder_norm(const Matrix& generator, Index d);

// Record max ||H(t)|| from an extracted path into an existing report.
void attach_hamiltonian_norms(DivergenceReport& report, const DilationPath& path);

} // namespace dforge
