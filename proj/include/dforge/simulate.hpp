// simulate.hpp — Dilated-dynamics integration, path comparison, and the
// integrated Hamiltonian-error bound on the unitary

#pragma once

#include <functional>

#include "dforge/dilation.hpp"

namespace dforge {

using HamiltonianFn = std::function<Matrix(double)>;

struct EvolveOptions {
    double drift_tol = kDefaultTol / 10; // re-unitarize / re-normalize beyond this
    bool keep_full = false;              // retain the joint state / unitary path
    bool force_unitary_mode = false;     // otherwise pure rho0 evolves as a state vector
};

struct SimulationResult {
    TimeGrid grid;
    Index dim = 0;  // system dimension
    Index rank = 0; // ancilla dimension
    std::vector<Matrix> reduced;
    std::vector<Matrix> unitaries;     // keep_full, unitary mode
    std::vector<Vector> joint_states;  // keep_full, state mode
    Matrix final_unitary;              // unitary mode
    Vector final_state;                // state mode
    bool state_mode = false;
    Index renormalizations = 0;

    StatePath reduced_path() const { return {grid, reduced}; }
};

// RK4 on U' = -i H(t) U (or psi' = -i H psi for pure rho0), reduced states by
// partial trace over the ancilla (initial ancilla state |0><0|). The start
// unitary defaults to the identity; divergent Hamiltonians must be entered at
// t_start > 0 with a consistent start unitary, or clamped first.
SimulationResult evolve_dilated(const HamiltonianFn& hamiltonian, Index dim, Index rank,
                                const DensityMatrix& rho0, const TimeGrid& grid,
                                const EvolveOptions& options = {}, const Matrix& u_start = Matrix());

// Grid-sampled Hamiltonian (values at fine-grid points, index-addressed).
struct SampledHamiltonian {
    TimeGrid grid;
    Index dim = 0;
    Index rank = 0;
    std::function<Matrix(Index)> at;
    Index first_valid = 0;
};
SampledHamiltonian sampled_hamiltonian(const DilationPath& path);

// Integrates a grid-sampled Hamiltonian with steps of 2*dt (midpoint samples
// come from the fine grid), producing results on the half-rate grid starting
// at the first valid sample. u_start defaults to the identity.
SimulationResult evolve_dilated(const SampledHamiltonian& hamiltonian, const DensityMatrix& rho0,
                                const EvolveOptions& options = {}, const Matrix& u_start = Matrix());

// Reduced dynamics carried directly by the completed unitary path.
StatePath reduced_dynamics(const DilationPath& path, const DensityMatrix& rho0);

struct ComparisonReport {
    TimeGrid grid;
    std::vector<double> trace_distances;
    double max_trace_distance = 0.0;
    std::vector<double> bound; // optional per-time error-bound column
    double tolerance = 0.0;
    bool pass = true;
};

ComparisonReport compare_paths(const StatePath& a, const StatePath& b, double tolerance = 0.0);

struct BoundPath {
    TimeGrid grid;
    std::vector<double> bound;  // integral of ||H_applied - H_target|| up to t
    std::vector<double> actual; // ||U_applied - U_target|| at t
    Matrix u_target_final;
    Matrix u_applied_final;
};

// Trapezoidal integral of the operator-norm Hamiltonian difference alongside
// the actual unitary deviation (both propagated with RK4 on the same grid).
// bound0 seeds the integral (mass accumulated before grid.t_start); the start
// unitaries default to the identity.
BoundPath unitary_error_bound(const HamiltonianFn& h_target, const HamiltonianFn& h_applied,
                              Index total_dim, const TimeGrid& grid,
                              const Matrix& u_target_start = Matrix(),
                              const Matrix& u_applied_start = Matrix(), double bound0 = 0.0);

// Same-grid sampled variant.
BoundPath unitary_error_bound(const DilationPath& target, const DilationPath& applied);

double purity(const Matrix& rho);

} // namespace dforge
