// eigentrack.hpp — Continuity-tracked eigendecomposition of a Hermitian
// matrix path (the Choi path of a channel family)

#pragma once

#include "dforge/lindblad.hpp"

namespace dforge {

// Choi matrix per grid point; Choi(0) = |Omega><Omega| when t_start = 0.
std::vector<Matrix> choi_path(const ChannelFamily& family);

struct RankPolicy {
    enum class Mode { kMaxOverWindow, kFixed };
    Mode mode = Mode::kMaxOverWindow;
    Index fixed_rank = 0;
    // eigenvalues below zero_threshold_scale * d count as numerically zero
    double zero_threshold_scale = 1e-12;
};

struct CrossingEvent {
    Index step;        // transition step i -> i+1
    Index track_a;
    Index track_b;
    double overlap_gap;
};

struct EigenTrack {
    TimeGrid grid;
    Index dim = 0;   // system dimension d (vectors have length d^2)
    Index rank = 0;  // retained rank R
    std::vector<RealVector> eigenvalues; // per point: R tracked values
    std::vector<Matrix> eigenvectors;    // per point: d^2 x R, orthonormal columns
    std::vector<CrossingEvent> crossings;

    double eigenvalue_sum_residual() const; // max_t |sum_k lambda_k - d| over retained+dropped
};

struct EigentrackOptions {
    RankPolicy rank_policy;
    double degeneracy_tol = 1e-8; // overlap-gap threshold for flagging crossings
    double psd_tol = 1e-7;        // input validation
    bool validate_input = true;
};

// Per-point Hermitian eigendecomposition followed by a sequential matching
// sweep: track k at t+dt is the unassigned vector with maximal |<v_k(t)|.>|,
// with the phase fixed so <v_k(t)|v_k(t+dt)> is real positive. Near-ties
// within degeneracy_tol are resolved by the same rule and recorded.
EigenTrack eigentrack(const std::vector<Matrix>& hermitian_path, const TimeGrid& grid,
                      const EigentrackOptions& options = {});

} // namespace dforge
