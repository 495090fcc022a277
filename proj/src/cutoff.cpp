// cutoff.cpp — Prefactor detection and Hamiltonian clamping

#include "dforge/cutoff.hpp"

#include <cmath>

namespace dforge {

PrefactorSplit split_prefactor(const DilationPath& path, double tol) {
    PrefactorSplit split;
    if (path.hamiltonians.empty())
        throw ValidationError("split_prefactor: Hamiltonian path not extracted");
    const Index n = Index(path.hamiltonians.size());

    // reference direction from the largest-norm point
    Index ref = path.h_valid_from;
    double best = -1.0;
    for (Index i = path.h_valid_from; i < n; ++i) {
        const double norm = ops::operator_norm(path.hamiltonians[i]);
        if (norm > best) {
            best = norm;
            ref = i;
        }
    }
    if (best <= 0.0) { // zero path: trivially factorable with h = 0
        split.factorable = true;
        split.X = Matrix::Zero(path.total_dim(), path.total_dim());
        split.h.assign(n, 0.0);
        return split;
    }
    Matrix x = path.hamiltonians[ref] / best;
    const double x2 = x.squaredNorm();

    split.h.assign(n, 0.0);
    for (Index i = path.h_valid_from; i < n; ++i) {
        const Matrix& h = path.hamiltonians[i];
        const double coeff = (x.adjoint() * h).trace().real() / x2; // Frobenius projection
        if (ops::operator_norm(h - coeff * x) > tol * std::max(1.0, ops::operator_norm(h))) {
            split.factorable = false;
            return split;
        }
        split.h[i] = coeff;
    }
    split.factorable = true;
    split.X = std::move(x);
    return split;
}

CutoffResult apply_cutoff(const DilationPath& path, const CutoffPolicy& policy, double factor_tol) {
    if (!(policy.C > 0.0)) throw ValidationError("apply_cutoff: C must be positive");
    if (path.hamiltonians.empty())
        throw ValidationError("apply_cutoff: Hamiltonian path not extracted");

    CutoffResult result;
    result.path = path;
    double first_clamped = -1.0, last_clamped = -1.0;

    if (policy.mode == CutoffPolicy::Mode::kPrefactorClamp) {
        const PrefactorSplit split = split_prefactor(path, factor_tol);
        if (!split.factorable)
            throw ValidationError("apply_cutoff: prefactor clamp requested on a non-factorable path");
        for (Index i = path.h_valid_from; i < Index(path.hamiltonians.size()); ++i) {
            if (std::abs(split.h[i]) > policy.C) {
                const double clamped = (split.h[i] > 0 ? policy.C : -policy.C);
                result.path.hamiltonians[i] = clamped * split.X;
                result.any_clamped = true;
                if (first_clamped < 0) first_clamped = path.grid.time(i);
                last_clamped = path.grid.time(i);
            }
        }
    } else {
        for (Index i = path.h_valid_from; i < Index(path.hamiltonians.size()); ++i) {
            const double norm = ops::operator_norm(path.hamiltonians[i]);
            if (norm > policy.C) {
                result.path.hamiltonians[i] *= policy.C / norm;
                result.any_clamped = true;
                if (first_clamped < 0) first_clamped = path.grid.time(i);
                last_clamped = path.grid.time(i);
            }
        }
    }
    result.window_start = std::max(first_clamped, 0.0);
    result.window_end = std::max(last_clamped, 0.0);
    return result;
}

double clamp_window_end(const std::function<double(double)>& h, double C, double t_lo, double t_hi) {
    auto f = [&](double t) { return std::abs(h(t)) - C; };
    double lo = t_lo, hi = t_hi;
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw ValidationError("clamp_window_end: |h| - C does not change sign on the bracket");
    const double tol = 1e-10 * (t_hi - t_lo);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace dforge
