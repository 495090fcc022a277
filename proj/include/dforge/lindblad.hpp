// lindblad.hpp — Time-dependent generators, channel propagation, and the
// master-equation reference integrator

#pragma once

#include <functional>
#include <vector>

#include "dforge/channels.hpp"
#include "dforge/profiles.hpp"

namespace dforge {

// Uniform time grid t_i = t_start + i * dt, i = 0..n_steps.
struct TimeGrid {
    double t_start = 0.0;
    double t_end = 1.0;
    Index n_steps = 1;

    TimeGrid() = default;
    TimeGrid(double t0, double t1, Index n);

    double dt() const { return (t_end - t_start) / double(n_steps); }
    Index size() const { return n_steps + 1; }
    double time(Index i) const { return t_start + double(i) * dt(); }
    bool same_as(const TimeGrid& other, double tol = 1e-12) const;
};

struct HamiltonianTerm {
    Matrix op;           // Hermitian
    TimeProfile coeff;   // dimension 1/time
};

struct JumpTerm {
    Matrix op;
    TimeProfile rate;    // may go negative (non-Markovian families)
};

// rho' = -i sum_h c_h(t) [H_h, rho]
//        + sum_j g_j(t) (L_j rho L_j† - (1/2){L_j† L_j, rho})
struct LindbladSpec {
    Index dim = 0;
    std::vector<HamiltonianTerm> hamiltonian_terms;
    std::vector<JumpTerm> jump_terms;

    Matrix hamiltonian_at(double t) const;
    void validate(double tol = kDefaultTol) const;
};

struct ChannelFamily {
    TimeGrid grid;
    std::vector<Matrix> superops; // one d^2 x d^2 matrix per grid point
    Index dim = 0;
};

struct StatePath {
    TimeGrid grid;
    std::vector<Matrix> states;
};

// Matrix form of the generator at time t under column-stacking vectorization.
Matrix lindblad_superop(const LindbladSpec& spec, double t);

struct PropagateOptions {
    double cptp_tol = 1e-7;  // looser integration-level tolerance
    bool validate = true;
};

// Time-ordered propagation of dE/dt = L_t E, E(t_start) = 1, by fixed-step RK4.
// Every output is validated CPTP to options.cptp_tol when requested.
ChannelFamily propagate_channel(const LindbladSpec& spec, const TimeGrid& grid,
                                const PropagateOptions& options = {});

// RK4 integration of rho' = L_t(rho); trace drift beyond tol is an error.
StatePath evolve_state_master(const LindbladSpec& spec, const DensityMatrix& rho0,
                              const TimeGrid& grid, double trace_tol = 1e-7);

// Generic fixed-step RK4 for dX/dt = A(t) X on [grid.t_start, grid.t_end],
// recording X at every grid point. Used by the propagators above and by the
// dilation integrators.
std::vector<Matrix> rk4_matrix_path(const std::function<Matrix(double)>& generator,
                                    const Matrix& x0, const TimeGrid& grid);

} // namespace dforge
