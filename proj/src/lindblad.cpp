// lindblad.cpp — Generator assembly and fixed-step propagation

#include "dforge/lindblad.hpp"

#include <cmath>
#include <string>

namespace dforge {

TimeGrid::TimeGrid(double t0, double t1, Index n) : t_start(t0), t_end(t1), n_steps(n) {
    if (!(t1 > t0) || n < 1) throw ValidationError("TimeGrid: need t_end > t_start and n_steps >= 1");
    if (t0 < 0.0) throw ValidationError("TimeGrid: t_start must be >= 0");
}

bool TimeGrid::same_as(const TimeGrid& other, double tol) const {
    return n_steps == other.n_steps && std::abs(t_start - other.t_start) <= tol &&
           std::abs(t_end - other.t_end) <= tol;
}

Matrix LindbladSpec::hamiltonian_at(double t) const {
    Matrix h = Matrix::Zero(dim, dim);
    for (const auto& term : hamiltonian_terms) h += term.coeff(t) * term.op;
    return h;
}

void LindbladSpec::validate(double tol) const {
    if (dim < 1) throw ValidationError("LindbladSpec: dim must be positive");
    for (const auto& term : hamiltonian_terms) {
        if (term.op.rows() != dim || term.op.cols() != dim)
            throw ValidationError("LindbladSpec: Hamiltonian term dimension mismatch");
        if (ops::hermiticity_residual(term.op) > tol)
            throw ValidationError("LindbladSpec: Hamiltonian term not Hermitian to tolerance");
    }
    for (const auto& term : jump_terms)
        if (term.op.rows() != dim || term.op.cols() != dim)
            throw ValidationError("LindbladSpec: jump term dimension mismatch");
}

Matrix lindblad_superop(const LindbladSpec& spec, double t) {
    const Index d = spec.dim;
    const Matrix id = Matrix::Identity(d, d);
    Matrix s = Matrix::Zero(d * d, d * d);
    const Matrix h = spec.hamiltonian_at(t);
    if (!spec.hamiltonian_terms.empty())
        s += Complex(0, -1) * (ops::kron(id, h) - ops::kron(h.transpose(), id));
    for (const auto& term : spec.jump_terms) {
        const double g = term.rate(t);
        if (g == 0.0) continue;
        const Matrix ldl = term.op.adjoint() * term.op;
        s += g * (ops::kron(term.op.conjugate(), term.op) -
                  0.5 * ops::kron(id, ldl) - 0.5 * ops::kron(ldl.transpose(), id));
    }
    return s;
}

std::vector<Matrix> rk4_matrix_path(const std::function<Matrix(double)>& generator,
                                    const Matrix& x0, const TimeGrid& grid) {
    std::vector<Matrix> out;
    out.reserve(grid.size());
    out.push_back(x0);
    Matrix x = x0;
    const double h = grid.dt();
    for (Index i = 0; i < grid.n_steps; ++i) {
        const double t = grid.time(i);
        const Matrix a1 = generator(t);
        const Matrix a2 = generator(t + 0.5 * h);
        const Matrix a4 = generator(t + h);
        const Matrix k1 = a1 * x;
        const Matrix k2 = a2 * (x + 0.5 * h * k1);
        const Matrix k3 = a2 * (x + 0.5 * h * k2);
        const Matrix k4 = a4 * (x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push_back(x);
    }
    return out;
}

ChannelFamily propagate_channel(const LindbladSpec& spec, const TimeGrid& grid,
                                const PropagateOptions& options) {
    spec.validate();
    const Index d = spec.dim;
    auto gen = [&spec](double t) { return lindblad_superop(spec, t); };
    ChannelFamily family;
    family.grid = grid;
    family.dim = d;
    family.superops = rk4_matrix_path(gen, Matrix::Identity(d * d, d * d), grid);
    if (options.validate) {
        for (Index i = 0; i < Index(family.superops.size()); ++i) {
            const auto report = validate_cptp(SuperoperatorMatrix(family.superops[i]), options.cptp_tol);
            if (!report.is_cp || !report.is_tp)
                throw NumericalError(
                    "propagate_channel: CPTP validation failed at grid point " + std::to_string(i) +
                    " (t = " + std::to_string(grid.time(i)) +
                    "), min Choi eigenvalue " + std::to_string(report.min_choi_eigenvalue) +
                    ", TP residual " + std::to_string(report.tp_residual) +
                    "; grid may be too coarse");
        }
    }
    return family;
}

StatePath evolve_state_master(const LindbladSpec& spec, const DensityMatrix& rho0,
                              const TimeGrid& grid, double trace_tol) {
    spec.validate();
    if (rho0.dim() != spec.dim) throw ValidationError("evolve_state_master: dimension mismatch");
    auto gen = [&spec](double t) { return lindblad_superop(spec, t); };
    StatePath path;
    path.grid = grid;
    path.states.reserve(grid.size());

    Vector v = ops::vec(rho0.rho);
    path.states.push_back(rho0.rho);
    const double h = grid.dt();
    for (Index i = 0; i < grid.n_steps; ++i) {
        const double t = grid.time(i);
        const Matrix a1 = gen(t);
        const Matrix a2 = gen(t + 0.5 * h);
        const Matrix a4 = gen(t + h);
        const Vector k1 = a1 * v;
        const Vector k2 = a2 * (v + 0.5 * h * k1);
        const Vector k3 = a2 * (v + 0.5 * h * k2);
        const Vector k4 = a4 * (v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        Matrix rho = ops::unvec(v, spec.dim, spec.dim);
        if (std::abs(rho.trace() - Complex(1.0)) > trace_tol)
            throw NumericalError("evolve_state_master: trace drift beyond tolerance at grid point " +
                                 std::to_string(i + 1));
        path.states.push_back(std::move(rho));
    }
    return path;
}

} // namespace dforge
