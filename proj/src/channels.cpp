// channels.cpp — Channel representation conversions and CPTP checks

#include "dforge/channels.hpp"

#include <Eigen/Eigenvalues>

namespace dforge {

namespace {

Index isqrt_checked(Index n, const char* what) {
    const auto d = static_cast<Index>(std::llround(std::sqrt(double(n))));
    if (d * d != n) throw ValidationError(std::string(what) + ": dimension is not a perfect square");
    return d;
}

} // namespace

bool DensityMatrix::is_valid(double tol) const {
    if (rho.rows() != rho.cols()) return false;
    if (ops::hermiticity_residual(rho) > tol) return false;
    if (std::abs(rho.trace() - Complex(1.0)) > tol) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(ops::hermitize(rho), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

DensityMatrix DensityMatrix::validated(Matrix m, double tol) {
    DensityMatrix d(std::move(m));
    if (!d.is_valid(tol)) throw ValidationError("DensityMatrix: not a valid state to tolerance");
    return d;
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
    const double n2 = psi.squaredNorm();
    if (n2 <= 0) throw ValidationError("DensityMatrix::pure: zero vector");
    return DensityMatrix((psi * psi.adjoint()) / n2);
}

SuperoperatorMatrix::SuperoperatorMatrix(Matrix s) : m(std::move(s)) {
    if (m.rows() != m.cols()) throw ValidationError("SuperoperatorMatrix: not square");
    isqrt_checked(m.rows(), "SuperoperatorMatrix");
}

Index SuperoperatorMatrix::dim() const { return isqrt_checked(m.rows(), "SuperoperatorMatrix"); }

ChoiMatrix::ChoiMatrix(Matrix c) : m(std::move(c)) {
    if (m.rows() != m.cols()) throw ValidationError("ChoiMatrix: not square");
    isqrt_checked(m.rows(), "ChoiMatrix");
}

Index ChoiMatrix::dim() const { return isqrt_checked(m.rows(), "ChoiMatrix"); }

double KrausSet::completeness_residual() const {
    if (ops.empty()) throw ValidationError("KrausSet: empty");
    Matrix acc = Matrix::Zero(dim(), dim());
    for (const auto& k : ops) acc += k.adjoint() * k;
    return ops::operator_norm(acc - Matrix::Identity(dim(), dim()));
}

Vector omega_vector(Index d) {
    Vector v = Vector::Zero(d * d);
    for (Index j = 0; j < d; ++j) v(j * d + j) = 1.0;
    return v;
}

Matrix omega_projector(Index d) {
    const Vector om = omega_vector(d);
    return om * om.adjoint();
}

Matrix reshuffle_matrix(const Matrix& m) {
    const Index d = isqrt_checked(m.rows(), "reshuffle");
    if (m.rows() != m.cols()) throw ValidationError("reshuffle: not square");
    Matrix out(m.rows(), m.cols());
    for (Index a = 0; a < d; ++a)
        for (Index b = 0; b < d; ++b)
            for (Index c = 0; c < d; ++c)
                for (Index e = 0; e < d; ++e)
                    out(a * d + b, c * d + e) = m(e * d + b, c * d + a);
    return out;
}

ChoiMatrix reshuffle(const SuperoperatorMatrix& s) { return ChoiMatrix(reshuffle_matrix(s.m)); }

SuperoperatorMatrix reshuffle(const ChoiMatrix& c) { return SuperoperatorMatrix(reshuffle_matrix(c.m)); }

SuperoperatorMatrix kraus_to_superop(const KrausSet& kraus) {
    if (kraus.ops.empty()) throw ValidationError("kraus_to_superop: empty Kraus set");
    const Index d = kraus.dim();
    Matrix s = Matrix::Zero(d * d, d * d);
    for (const auto& mk : kraus.ops) {
        if (mk.rows() != d || mk.cols() != d)
            throw ValidationError("kraus_to_superop: inconsistent dimensions");
        s += ops::kron(mk.conjugate(), mk);
    }
    return SuperoperatorMatrix(std::move(s));
}

KrausSet kraus_from_choi(const ChoiMatrix& choi, double threshold) {
    const Index d = choi.dim();
    Eigen::SelfAdjointEigenSolver<Matrix> es(ops::hermitize(choi.m));
    std::vector<Matrix> ops_out;
    for (Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
        const double lam = es.eigenvalues()(i);
        if (lam <= threshold) break; // ascending order: all remaining are smaller
        ops_out.push_back(std::sqrt(lam) * ops::unvec(es.eigenvectors().col(i), d, d));
    }
    return KrausSet(std::move(ops_out));
}

Matrix apply_channel(const SuperoperatorMatrix& s, const Matrix& rho) {
    const Index d = s.dim();
    if (rho.rows() != d || rho.cols() != d)
        throw ValidationError("apply_channel: dimension mismatch");
    return ops::unvec(Vector(s.m * ops::vec(rho)), d, d);
}

CptpReport validate_cptp(const SuperoperatorMatrix& s, double tol) {
    const Index d = s.dim();
    const Matrix choi = reshuffle_matrix(s.m);
    CptpReport report;
    report.herm_residual = ops::hermiticity_residual(choi);
    Eigen::SelfAdjointEigenSolver<Matrix> es(ops::hermitize(choi), Eigen::EigenvaluesOnly);
    report.min_choi_eigenvalue = es.eigenvalues().minCoeff();
    report.is_cp = report.min_choi_eigenvalue >= -tol && report.herm_residual <= tol;
    // output factor is the second index; trace it out
    const Matrix marginal = ops::partial_trace_ancilla(choi, d, d);
    report.tp_residual = ops::operator_norm(marginal - Matrix::Identity(d, d));
    report.is_tp = report.tp_residual <= tol;
    return report;
}

} // namespace dforge
