// simulate.cpp — Integration of dilated dynamics and comparisons

#include "dforge/simulate.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace dforge {

namespace {

bool finite(const Matrix& m) { return m.allFinite(); }

// reduced state of a pure joint vector, index (i,k) = i*rank + k
Matrix reduced_from_vector(const Vector& psi, Index dim, Index rank) {
    Matrix out = Matrix::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j)
            for (Index k = 0; k < rank; ++k)
                out(i, j) += psi(i * rank + k) * std::conj(psi(j * rank + k));
    return out;
}

Matrix reduced_from_unitary(const Matrix& u, const Matrix& rho0, Index dim, Index rank) {
    Matrix omega = Matrix::Zero(rank, rank);
    omega(0, 0) = 1.0;
    return ops::partial_trace_ancilla(u * ops::kron(rho0, omega) * u.adjoint(), dim, rank);
}

// pure-state factor of rho0 if it is pure to tolerance
bool pure_factor(const Matrix& rho, Vector& psi, double tol = 1e-10) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(ops::hermitize(rho));
    const Index top = rho.rows() - 1;
    if (std::abs(es.eigenvalues()(top) - 1.0) > tol) return false;
    psi = es.eigenvectors().col(top);
    return true;
}

} // namespace

SimulationResult evolve_dilated(const HamiltonianFn& hamiltonian, Index dim, Index rank,
                                const DensityMatrix& rho0, const TimeGrid& grid,
                                const EvolveOptions& options, const Matrix& u_start) {
    const Index n = dim * rank;
    if (rho0.dim() != dim) throw ValidationError("evolve_dilated: state dimension mismatch");
    Matrix u0 = u_start.size() == 0 ? Matrix(Matrix::Identity(n, n)) : u_start;
    if (u0.rows() != n || u0.cols() != n)
        throw ValidationError("evolve_dilated: start unitary dimension mismatch");
    if (!finite(hamiltonian(grid.t_start)))
        throw ValidationError(
            "evolve_dilated: Hamiltonian not finite at t_start (divergent start requires "
            "t_start > 0 with a consistent start unitary, or a cutoff)");

    SimulationResult result;
    result.grid = grid;
    result.dim = dim;
    result.rank = rank;
    result.reduced.reserve(grid.size());

    Vector psi0;
    const bool state_mode = !options.force_unitary_mode && pure_factor(rho0.rho, psi0);
    result.state_mode = state_mode;
    const double h = grid.dt();

    if (state_mode) {
        Vector anc = Vector::Zero(rank);
        anc(0) = 1.0;
        Vector psi = u0 * Vector(ops::kron(psi0, anc)); // |psi0> ⊗ |0>
        result.reduced.push_back(reduced_from_vector(psi, dim, rank));
        if (options.keep_full) result.joint_states.push_back(psi);
        for (Index i = 0; i < grid.n_steps; ++i) {
            const double t = grid.time(i);
            const Matrix a1 = Complex(0, -1) * hamiltonian(t);
            const Matrix a2 = Complex(0, -1) * hamiltonian(t + 0.5 * h);
            const Matrix a4 = Complex(0, -1) * hamiltonian(t + h);
            const Vector k1 = a1 * psi;
            const Vector k2 = a2 * (psi + 0.5 * h * k1);
            const Vector k3 = a2 * (psi + 0.5 * h * k2);
            const Vector k4 = a4 * (psi + h * k3);
            psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (std::abs(psi.norm() - 1.0) > options.drift_tol) {
                psi.normalize();
                ++result.renormalizations;
            }
            result.reduced.push_back(reduced_from_vector(psi, dim, rank));
            if (options.keep_full) result.joint_states.push_back(psi);
        }
        result.final_state = psi;
    } else {
        Matrix u = u0;
        result.reduced.push_back(reduced_from_unitary(u, rho0.rho, dim, rank));
        if (options.keep_full) result.unitaries.push_back(u);
        for (Index i = 0; i < grid.n_steps; ++i) {
            const double t = grid.time(i);
            const Matrix a1 = Complex(0, -1) * hamiltonian(t);
            const Matrix a2 = Complex(0, -1) * hamiltonian(t + 0.5 * h);
            const Matrix a4 = Complex(0, -1) * hamiltonian(t + h);
            const Matrix k1 = a1 * u;
            const Matrix k2 = a2 * (u + 0.5 * h * k1);
            const Matrix k3 = a2 * (u + 0.5 * h * k2);
            const Matrix k4 = a4 * (u + h * k3);
            u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if ((u * u.adjoint() - Matrix::Identity(n, n)).norm() > options.drift_tol) {
                u = ops::polar_unitary(u);
                ++result.renormalizations;
            }
            result.reduced.push_back(reduced_from_unitary(u, rho0.rho, dim, rank));
            if (options.keep_full) result.unitaries.push_back(u);
        }
        result.final_unitary = u;
    }
    return result;
}

SampledHamiltonian sampled_hamiltonian(const DilationPath& path) {
    if (path.hamiltonians.empty())
        throw ValidationError("sampled_hamiltonian: Hamiltonian path not extracted");
    SampledHamiltonian s;
    s.grid = path.grid;
    s.dim = path.dim;
    s.rank = path.rank;
    s.first_valid = path.h_valid_from;
    s.at = [&path](Index i) { return path.hamiltonians[i]; };
    return s;
}

SimulationResult evolve_dilated(const SampledHamiltonian& hamiltonian, const DensityMatrix& rho0,
                                const EvolveOptions& options, const Matrix& u_start) {
    Index s = hamiltonian.first_valid;
    if ((hamiltonian.grid.n_steps - s) % 2 != 0) ++s; // pair up fine-grid intervals
    if (hamiltonian.grid.n_steps - s < 2)
        throw ValidationError("evolve_dilated: sampled path too short");
    const Index n_coarse = (hamiltonian.grid.n_steps - s) / 2;
    const TimeGrid coarse(hamiltonian.grid.time(s), hamiltonian.grid.t_end, n_coarse);
    const Index dim = hamiltonian.dim, rank = hamiltonian.rank, n = dim * rank;

    Matrix u0 = u_start.size() == 0 ? Matrix(Matrix::Identity(n, n)) : u_start;

    SimulationResult result;
    result.grid = coarse;
    result.dim = dim;
    result.rank = rank;
    result.state_mode = false;
    result.reduced.reserve(coarse.size());

    Matrix u = u0;
    result.reduced.push_back(reduced_from_unitary(u, rho0.rho, dim, rank));
    if (options.keep_full) result.unitaries.push_back(u);
    const double h = 2.0 * hamiltonian.grid.dt();
    for (Index i = 0; i < n_coarse; ++i) {
        const Matrix a1 = Complex(0, -1) * hamiltonian.at(s + 2 * i);
        const Matrix a2 = Complex(0, -1) * hamiltonian.at(s + 2 * i + 1);
        const Matrix a4 = Complex(0, -1) * hamiltonian.at(s + 2 * i + 2);
        const Matrix k1 = a1 * u;
        const Matrix k2 = a2 * (u + 0.5 * h * k1);
        const Matrix k3 = a2 * (u + 0.5 * h * k2);
        const Matrix k4 = a4 * (u + h * k3);
        u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((u * u.adjoint() - Matrix::Identity(n, n)).norm() > options.drift_tol) {
            u = ops::polar_unitary(u);
            ++result.renormalizations;
        }
        result.reduced.push_back(reduced_from_unitary(u, rho0.rho, dim, rank));
        if (options.keep_full) result.unitaries.push_back(u);
    }
    result.final_unitary = u;
    return result;
}

StatePath reduced_dynamics(const DilationPath& path, const DensityMatrix& rho0) {
    StatePath out;
    out.grid = path.grid;
    out.states.reserve(path.unitaries.size());
    for (Index i = 0; i < Index(path.unitaries.size()); ++i)
        out.states.push_back(path.reduced_state(i, rho0.rho));
    return out;
}

ComparisonReport compare_paths(const StatePath& a, const StatePath& b, double tolerance) {
    if (!a.grid.same_as(b.grid) || a.states.size() != b.states.size())
        throw ValidationError("compare_paths: grid mismatch");
    ComparisonReport report;
    report.grid = a.grid;
    report.tolerance = tolerance;
    report.trace_distances.reserve(a.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        const double td = ops::trace_distance(a.states[i], b.states[i]);
        report.trace_distances.push_back(td);
        report.max_trace_distance = std::max(report.max_trace_distance, td);
    }
    report.pass = tolerance <= 0.0 || report.max_trace_distance <= tolerance;
    return report;
}

BoundPath unitary_error_bound(const HamiltonianFn& h_target, const HamiltonianFn& h_applied,
                              Index total_dim, const TimeGrid& grid, const Matrix& u_target_start,
                              const Matrix& u_applied_start, double bound0) {
    const Index n = total_dim;
    Matrix ut = u_target_start.size() == 0 ? Matrix(Matrix::Identity(n, n)) : u_target_start;
    Matrix ua = u_applied_start.size() == 0 ? Matrix(Matrix::Identity(n, n)) : u_applied_start;

    BoundPath out;
    out.grid = grid;
    out.bound.reserve(grid.size());
    out.actual.reserve(grid.size());

    auto dh = [&](double t) { return ops::operator_norm(h_applied(t) - h_target(t)); };
    double acc = bound0;
    double prev = dh(grid.t_start);
    out.bound.push_back(acc);
    out.actual.push_back(ops::operator_norm(ua - ut));
    const double h = grid.dt();
    for (Index i = 0; i < grid.n_steps; ++i) {
        const double t = grid.time(i);
        for (Matrix* u : {&ut, &ua}) {
            const HamiltonianFn& hf = (u == &ut) ? h_target : h_applied;
            const Matrix a1 = Complex(0, -1) * hf(t);
            const Matrix a2 = Complex(0, -1) * hf(t + 0.5 * h);
            const Matrix a4 = Complex(0, -1) * hf(t + h);
            const Matrix k1 = a1 * (*u);
            const Matrix k2 = a2 * (*u + 0.5 * h * k1);
            const Matrix k3 = a2 * (*u + 0.5 * h * k2);
            const Matrix k4 = a4 * (*u + h * k3);
            *u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        const double cur = dh(t + h);
        acc += 0.5 * h * (prev + cur);
        prev = cur;
        out.bound.push_back(acc);
        out.actual.push_back(ops::operator_norm(ua - ut));
    }
    out.u_target_final = ut;
    out.u_applied_final = ua;
    return out;
}

BoundPath unitary_error_bound(const DilationPath& target, const DilationPath& applied) {
    if (!target.grid.same_as(applied.grid))
        throw ValidationError("unitary_error_bound: grid mismatch");
    BoundPath out;
    out.grid = target.grid;
    const Index n_points = Index(target.hamiltonians.size());
    const Index s = std::max(target.h_valid_from, applied.h_valid_from);
    double acc = 0.0;
    double prev = 0.0;
    const double h = target.grid.dt();
    for (Index i = 0; i < n_points; ++i) {
        double cur = 0.0;
        if (i >= s) cur = ops::operator_norm(applied.hamiltonians[i] - target.hamiltonians[i]);
        if (i > 0) acc += 0.5 * h * (prev + cur);
        prev = cur;
        out.bound.push_back(acc);
        out.actual.push_back(ops::operator_norm(applied.unitaries[i] - target.unitaries[i]));
    }
    return out;
}

double purity(const Matrix& rho) { return (rho * rho).trace().real(); }

} // namespace dforge
