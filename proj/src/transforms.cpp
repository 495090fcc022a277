// transforms.cpp — Frame change, composition, perturbation, rescaling

#include "dforge/transforms.hpp"

#include "dforge/cutoff.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <string>

namespace dforge {

Matrix FrameSpec::unitary_at(double t) const { return ops::expi_hermitian(h0, t); }

DilationPath frame_change(const FrameSpec& frame, const DilationPath& tilde) {
    if (frame.h0.rows() != tilde.dim)
        throw ValidationError("frame_change: frame acts on the system factor only");
    DilationPath out = tilde;
    const Matrix id_anc = Matrix::Identity(tilde.rank, tilde.rank);
    for (Index i = 0; i < Index(tilde.unitaries.size()); ++i) {
        const Matrix v = ops::kron(frame.unitary_at(tilde.grid.time(i)), id_anc);
        out.unitaries[i] = v * tilde.unitaries[i];
        if (!tilde.hamiltonians.empty() && Index(tilde.hamiltonians[i].size()) > 0)
            out.hamiltonians[i] = ops::kron(frame.h0, id_anc) +
                                  v * tilde.hamiltonians[i] * v.adjoint();
    }
    return out;
}

double commutator_defect(const ChannelFamily& a, const ChannelFamily& b) {
    if (!a.grid.same_as(b.grid)) throw ValidationError("commutator_defect: grid mismatch");
    const Index n = a.grid.size();
    const Index stride = std::max<Index>(1, n / 25);
    double worst = 0.0;
    for (Index i = 0; i < n; i += stride) {
        const Matrix& e1 = a.superops[i];
        const Matrix& e2 = b.superops[i];
        worst = std::max(worst, ops::operator_norm(e1 * e2 - e2 * e1));
    }
    return worst;
}

Matrix embed_two_factor(const Matrix& op, const std::vector<Index>& dims, Index fi, Index fj) {
    if (fi == fj || fi >= Index(dims.size()) || fj >= Index(dims.size()))
        throw ValidationError("embed_two_factor: bad factor indices");
    const Index di = dims[fi], dj = dims[fj];
    if (op.rows() != di * dj) throw ValidationError("embed_two_factor: operator size mismatch");
    Index total = 1;
    for (Index d : dims) total *= d;

    // strides of each factor in the flattened index
    std::vector<Index> stride(dims.size(), 1);
    for (Index f = Index(dims.size()) - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

    Matrix out = Matrix::Zero(total, total);
    for (Index row = 0; row < total; ++row) {
        const Index xi = (row / stride[fi]) % di;
        const Index xj = (row / stride[fj]) % dj;
        const Index rest = row - xi * stride[fi] - xj * stride[fj];
        for (Index yi = 0; yi < di; ++yi)
            for (Index yj = 0; yj < dj; ++yj)
                out(row, rest + yi * stride[fi] + yj * stride[fj]) = op(xi * dj + xj, yi * dj + yj);
    }
    return out;
}

DilationPath compose_commuting(const DilationPath& d1, const DilationPath& d2,
                               const ChannelFamily* family1, const ChannelFamily* family2,
                               double tol) {
    if (d1.dim != d2.dim) throw ValidationError("compose_commuting: system dimension mismatch");
    if (!d1.grid.same_as(d2.grid)) throw ValidationError("compose_commuting: grid mismatch");
    if (family1 && family2) {
        const double defect = commutator_defect(*family1, *family2);
        if (defect > tol)
            throw ValidationError("compose_commuting: channels do not commute (defect " +
                                  std::to_string(defect) + ")");
    }
    const Index d = d1.dim, rc = d1.rank, rb = d2.rank;
    const std::vector<Index> dims = {d, rb, rc}; // [A, B, C]
    DilationPath out;
    out.grid = d1.grid;
    out.dim = d;
    out.rank = rb * rc;
    out.h_valid_from = std::max(d1.h_valid_from, d2.h_valid_from);
    const bool with_h = !d1.hamiltonians.empty() && !d2.hamiltonians.empty();
    if (with_h) out.hamiltonians.assign(d1.unitaries.size(), Matrix());
    out.unitaries.reserve(d1.unitaries.size());
    for (Index i = 0; i < Index(d1.unitaries.size()); ++i) {
        const Matrix u1 = embed_two_factor(d1.unitaries[i], dims, 0, 2);
        const Matrix u2 = embed_two_factor(d2.unitaries[i], dims, 0, 1);
        out.unitaries.push_back(u1 * u2);
        if (with_h && i >= out.h_valid_from)
            out.hamiltonians[i] = embed_two_factor(d1.hamiltonians[i], dims, 0, 2) +
                                  u1 * embed_two_factor(d2.hamiltonians[i], dims, 0, 1) *
                                      u1.adjoint();
    }
    return out;
}

PerturbedChannel perturbative_channel(const PerturbationSpec& spec, const TimeGrid& grid) {
    spec.base.validate();
    spec.perturbation.validate();
    if (spec.base.dim != spec.perturbation.dim)
        throw ValidationError("perturbative_channel: dimension mismatch");
    const Index d = spec.base.dim;
    const Index n2 = d * d;
    const double h = grid.dt();

    PerturbedChannel out;
    out.base.grid = grid;
    out.base.dim = d;
    out.base.superops.reserve(grid.size());
    out.first_order.reserve(grid.size());

    Matrix e0 = Matrix::Identity(n2, n2);
    Matrix s = Matrix::Zero(n2, n2);
    out.base.superops.push_back(e0);
    out.first_order.push_back(s);

    auto gen = [&spec](double t) { return lindblad_superop(spec.base, t); };
    Matrix g_prev = lindblad_superop(spec.perturbation, grid.t_start) * e0;
    for (Index i = 0; i < grid.n_steps; ++i) {
        const double t = grid.time(i);
        // one-step propagator of the base generator
        const Matrix a1 = gen(t);
        const Matrix a2 = gen(t + 0.5 * h);
        const Matrix a4 = gen(t + h);
        const Matrix id = Matrix::Identity(n2, n2);
        const Matrix k1 = a1;
        const Matrix k2 = a2 * (id + 0.5 * h * k1);
        const Matrix k3 = a2 * (id + 0.5 * h * k2);
        const Matrix k4 = a4 * (id + h * k3);
        const Matrix step = id + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        e0 = step * e0;
        const Matrix g_cur = lindblad_superop(spec.perturbation, t + h) * e0;
        s = step * s + 0.5 * h * (step * g_prev + g_cur); // trapezoidal panel
        g_prev = g_cur;
        out.base.superops.push_back(e0);
        out.first_order.push_back(s);
    }
    return out;
}

FirstOrderKraus kraus_first_order(const EigenTrack& base, const std::vector<Matrix>& choi1,
                                  double degeneracy_tol, double rank_change_tol) {
    if (choi1.size() != base.eigenvalues.size())
        throw ValidationError("kraus_first_order: path length mismatch");
    const Index d = base.dim, r = base.rank, n2 = d * d;

    FirstOrderKraus out;
    out.grid = base.grid;
    out.dim = d;
    out.rank = r;
    out.kraus1.reserve(choi1.size());
    const double zero_thresh = 1e-12 * double(d);

    for (Index i = 0; i < Index(choi1.size()); ++i) {
        const RealVector& lam = base.eigenvalues[i];
        const Matrix& v = base.eigenvectors[i];
        const Matrix lam1_full = ops::hermitize(choi1[i]);

        // group retained tracks by numerically degenerate eigenvalue
        std::vector<Index> group(r, -1);
        std::vector<std::vector<Index>> groups;
        const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
        for (Index k = 0; k < r; ++k) {
            if (group[k] >= 0) continue;
            group[k] = Index(groups.size());
            groups.push_back({k});
            for (Index m = k + 1; m < r; ++m)
                if (group[m] < 0 && std::abs(lam(k) - lam(m)) <= degeneracy_tol * scale) {
                    group[m] = group[k];
                    groups.back().push_back(m);
                }
        }

        // complement (dropped zero modes) projector
        const Matrix p_complement = Matrix::Identity(n2, n2) - v * v.adjoint();

        // first-order rates on the kernel: complement block of the correction
        const double kernel_rate = ops::operator_norm(p_complement * lam1_full * p_complement);
        out.max_kernel_rate = std::max(out.max_kernel_rate, kernel_rate);
        if (kernel_rate > rank_change_tol)
            throw ValidationError(
                "kraus_first_order: perturbation changes the Kraus rank at grid point " +
                std::to_string(i) + " (kernel rate " + std::to_string(kernel_rate) +
                "); the rank-changing branch is unsupported");

        // per-group diagonalization of the correction block
        std::vector<double> lam1(r, 0.0);
        Matrix v0 = v; // zeroth-order vectors, possibly rotated within groups
        for (const auto& g : groups) {
            if (g.size() == 1) {
                lam1[g[0]] = (v.col(g[0]).adjoint() * lam1_full * v.col(g[0]))(0).real();
                continue;
            }
            Matrix sub(n2, Index(g.size()));
            for (Index c = 0; c < Index(g.size()); ++c) sub.col(c) = v.col(g[c]);
            Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(sub.adjoint() * lam1_full * sub));
            const Matrix rotated = sub * es.eigenvectors();
            for (Index c = 0; c < Index(g.size()); ++c) {
                lam1[g[c]] = es.eigenvalues()(c);
                v0.col(g[c]) = rotated.col(c);
            }
        }

        // assemble corrections
        std::vector<Matrix> at_t(r);
        for (Index k = 0; k < r; ++k) {
            if (lam(k) <= zero_thresh) {
                if (std::abs(lam1[k]) > rank_change_tol)
                    throw ValidationError(
                        "kraus_first_order: zero eigenvalue with nonzero first-order rate at grid "
                        "point " + std::to_string(i) + "; the rank-changing branch is unsupported");
                at_t[k] = Matrix::Zero(d, d);
                continue;
            }
            // v1 = sum over other groups  P_G Lam1 v_k / (lam_k - lam_G) + complement part
            Vector v1 = Vector::Zero(n2);
            const Vector lv = lam1_full * v0.col(k);
            for (Index gi = 0; gi < Index(groups.size()); ++gi) {
                if (group[k] == gi) continue;
                for (Index m : groups[gi])
                    v1 += v0.col(m) * (v0.col(m).adjoint() * lv)(0) / (lam(k) - lam(m));
            }
            v1 += (p_complement * lv) / lam(k);
            const Vector correction =
                std::sqrt(lam(k)) * v1 + (lam1[k] / (2.0 * std::sqrt(lam(k)))) * v0.col(k);
            at_t[k] = ops::unvec(correction, d, d);
        }
        out.kraus1.push_back(std::move(at_t));
    }
    return out;
}

namespace {

Vector stacked_column(const std::vector<Matrix>& kraus, Index d, Index r, Index j) {
    Vector v = Vector::Zero(d * r);
    for (Index k = 0; k < r; ++k)
        for (Index i = 0; i < d; ++i)
            v(i * r + k) += kraus[k](i, j);
    return v;
}

} // namespace

std::vector<Matrix> perturbative_dilation(const DilationPath& base, const KrausFamily& base_kraus,
                                          const FirstOrderKraus& kraus1) {
    if (!base.grid.same_as(kraus1.grid) || !base.grid.same_as(base_kraus.grid))
        throw ValidationError("perturbative_dilation: grid mismatch");
    if (base.rank != kraus1.rank || base.dim != kraus1.dim)
        throw ValidationError("perturbative_dilation: rank/dimension mismatch");
    if (base.hamiltonians.empty())
        throw ValidationError("perturbative_dilation: base Hamiltonian path not extracted");
    const Index d = base.dim, r = base.rank, n = d * r;
    const Index n_points = Index(base.unitaries.size());

    // U1 = W U0 with W = A - A† - P A P (anti-Hermitian, matches the
    // constrained columns, minimum Frobenius norm; QWQ block left zero)
    std::vector<Matrix> u1(n_points);
    for (Index i = 0; i < n_points; ++i) {
        Matrix a = Matrix::Zero(n, n);
        Matrix p = Matrix::Zero(n, n);
        Matrix consistency = Matrix::Zero(d, d);
        std::vector<Vector> us(d), ms(d);
        for (Index j = 0; j < d; ++j) {
            us[j] = stacked_column(base_kraus.kraus[i], d, r, j);
            ms[j] = stacked_column(kraus1.kraus1[i], d, r, j);
            a += ms[j] * us[j].adjoint();
            p += us[j] * us[j].adjoint();
        }
        for (Index jj = 0; jj < d; ++jj)
            for (Index kk = 0; kk < d; ++kk)
                consistency(jj, kk) = (us[jj].adjoint() * ms[kk])(0);
        if (ops::operator_norm(consistency + consistency.adjoint()) > 1e-6)
            throw NumericalError(
                "perturbative_dilation: first-order completeness violated at grid point " +
                std::to_string(i));
        const Matrix w = a - a.adjoint() - p * a * p;
        u1[i] = w * base.unitaries[i];
    }

    const double dt = base.grid.dt();
    std::vector<Matrix> h1(n_points, Matrix::Zero(n, n));
    const Index s = base.h_valid_from;
    for (Index i = s; i < n_points; ++i) {
        Matrix du;
        if (i == s && i + 2 < n_points)
            du = (-3.0 * u1[i] + 4.0 * u1[i + 1] - u1[i + 2]) / (2.0 * dt);
        else if (i == n_points - 1)
            du = (3.0 * u1[i] - 4.0 * u1[i - 1] + u1[i - 2]) / (2.0 * dt);
        else
            du = (u1[i + 1] - u1[i - 1]) / (2.0 * dt);
        h1[i] = ops::hermitize((Complex(0, 1) * du - base.hamiltonians[i] * u1[i]) *
                               base.unitaries[i].adjoint());
    }
    return h1;
}

RescaleMap rescale_time(const DilationPath& path, double h0, double factor_tol) {
    if (!(h0 > 0.0)) throw ValidationError("rescale_time: h0 must be positive");
    const PrefactorSplit split = split_prefactor(path, factor_tol);
    if (!split.factorable)
        throw ValidationError("rescale_time: Hamiltonian path is not of single-factor form");

    const Index s = path.h_valid_from;
    const Index n = Index(split.h.size());
    std::vector<double> times, hs, taus;
    times.reserve(n - s);
    hs.reserve(n - s);
    taus.reserve(n - s);
    double acc = 0.0;
    for (Index i = s; i < n; ++i) {
        times.push_back(path.grid.time(i));
        hs.push_back(split.h[i]);
        if (i > s) acc += 0.5 * path.grid.dt() * (split.h[i - 1] + split.h[i]) / h0;
        taus.push_back(acc);
    }
    RescaleMap map;
    map.h = TimeProfile::tabulated(times, hs);
    map.tau = TimeProfile::tabulated(times, taus);
    map.h0 = h0;
    map.X = split.X;
    return map;
}

Matrix CompositeDilation::hamiltonian_at(Index i) const {
    std::vector<Index> dims(2 * n_qubits);
    for (Index q = 0; q < n_qubits; ++q) {
        dims[q] = 2;
        dims[n_qubits + q] = ancilla_dims[q];
    }
    Matrix h = Matrix::Zero(system_dim * ancilla_dim, system_dim * ancilla_dim);
    for (Index q = 0; q < n_qubits; ++q)
        h += embed_two_factor(part_hamiltonians[q][i], dims, q, n_qubits + q);
    return h;
}

CompositeDilation tensor_independent(const std::vector<const DilationPath*>& dilations,
                                     Index max_total_dim) {
    if (dilations.empty()) throw ValidationError("tensor_independent: no inputs");
    CompositeDilation out;
    out.grid = dilations.front()->grid;
    out.n_qubits = Index(dilations.size());
    out.system_dim = 1;
    out.ancilla_dim = 1;
    for (const DilationPath* dp : dilations) {
        if (dp->dim != 2)
            throw ValidationError("tensor_independent: parts must act on single qubits");
        if (dp->rank > 4)
            throw ValidationError("tensor_independent: ancilla dimension above 4 unsupported");
        if (!dp->grid.same_as(out.grid))
            throw ValidationError("tensor_independent: parts must share the grid");
        if (dp->hamiltonians.empty())
            throw ValidationError("tensor_independent: part Hamiltonian path not extracted");
        out.ancilla_dims.push_back(dp->rank);
        out.system_dim *= 2;
        out.ancilla_dim *= dp->rank;
        out.h_valid_from = std::max(out.h_valid_from, dp->h_valid_from);
        out.part_hamiltonians.push_back(dp->hamiltonians);
    }
    if (out.system_dim * out.ancilla_dim > max_total_dim)
        throw ValidationError("tensor_independent: dimension overflow beyond configured cap");
    return out;
}

SampledHamiltonian sampled_hamiltonian(const CompositeDilation& composite) {
    SampledHamiltonian s;
    s.grid = composite.grid;
    s.dim = composite.system_dim;
    s.rank = composite.ancilla_dim;
    s.first_valid = composite.h_valid_from;
    s.at = [&composite](Index i) { return composite.hamiltonian_at(i); };
    return s;
}

} // namespace dforge
