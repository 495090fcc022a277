// eigentrack.cpp — Tracked eigendecomposition of a Hermitian matrix path

#include "dforge/eigentrack.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>
#include <string>

namespace dforge {

std::vector<Matrix> choi_path(const ChannelFamily& family) {
    std::vector<Matrix> out;
    out.reserve(family.superops.size());
    for (const auto& s : family.superops) out.push_back(reshuffle_matrix(s));
    return out;
}

namespace {

struct PointDecomposition {
    RealVector values;  // descending
    Matrix vectors;     // columns matching values
};

PointDecomposition decompose(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(ops::hermitize(m));
    const Index n = m.rows();
    PointDecomposition out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Index k = 0; k < n; ++k) { // flip to descending
        out.values(k) = es.eigenvalues()(n - 1 - k);
        out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
    }
    return out;
}

// Rotate the columns of `base` (an orthonormal set spanning a degenerate
// subspace) to best match `target` columns (orthogonal Procrustes).
Matrix procrustes_align(const Matrix& base, const Matrix& target) {
    const Matrix overlap = base.adjoint() * target;
    Eigen::JacobiSVD<Matrix> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return base * (svd.matrixU() * svd.matrixV().adjoint());
}

} // namespace

double EigenTrack::eigenvalue_sum_residual() const {
    double worst = 0.0;
    for (Index i = 0; i < Index(eigenvalues.size()); ++i)
        worst = std::max(worst, std::abs(eigenvalues[i].sum() - double(dim)));
    return worst;
}

EigenTrack eigentrack(const std::vector<Matrix>& hermitian_path, const TimeGrid& grid,
                      const EigentrackOptions& options) {
    if (hermitian_path.empty() || Index(hermitian_path.size()) != grid.size())
        throw ValidationError("eigentrack: path/grid size mismatch");
    const Index n2 = hermitian_path.front().rows();
    const auto d = static_cast<Index>(std::llround(std::sqrt(double(n2))));
    if (d * d != n2) throw ValidationError("eigentrack: matrices must be d^2 x d^2");

    const Index n_points = grid.size();
    std::vector<PointDecomposition> decomposed(n_points);
    for (Index i = 0; i < n_points; ++i) {
        const Matrix& m = hermitian_path[i];
        if (m.rows() != n2 || m.cols() != n2)
            throw ValidationError("eigentrack: inconsistent dimensions along the path");
        if (options.validate_input) {
            if (ops::hermiticity_residual(m) > options.psd_tol * double(d))
                throw ValidationError("eigentrack: input not Hermitian to tolerance at point " +
                                      std::to_string(i));
        }
        decomposed[i] = decompose(m);
        if (options.validate_input && decomposed[i].values.minCoeff() < -options.psd_tol * double(d))
            throw ValidationError("eigentrack: input not PSD to tolerance at point " +
                                  std::to_string(i));
    }

    std::vector<CrossingEvent> crossings;

    // Sequential sweep: permute+phase-fix each point against the previous one.
    for (Index i = 0; i + 1 < n_points; ++i) {
        const Matrix& prev = decomposed[i].vectors;
        PointDecomposition& cur = decomposed[i + 1];
        const Eigen::MatrixXd overlap = (prev.adjoint() * cur.vectors).cwiseAbs();

        std::vector<bool> row_done(n2, false), col_done(n2, false);
        std::vector<Index> assignment(n2, -1); // track j -> current column
        for (Index pick = 0; pick < n2; ++pick) {
            double best = -1.0, second = -1.0;
            Index bj = -1, bk = -1;
            for (Index j = 0; j < n2; ++j) {
                if (row_done[j]) continue;
                for (Index k = 0; k < n2; ++k) {
                    if (col_done[k]) continue;
                    const double o = overlap(j, k);
                    if (o > best) {
                        second = best;
                        best = o;
                        bj = j;
                        bk = k;
                    } else if (o > second) {
                        second = o;
                    }
                }
            }
            assignment[bj] = bk;
            row_done[bj] = true;
            col_done[bk] = true;
            if (second >= 0.0 && best - second <= options.degeneracy_tol)
                crossings.push_back({i, bj, bk, best - second});
        }

        PointDecomposition permuted;
        permuted.values.resize(n2);
        permuted.vectors.resize(n2, n2);
        for (Index j = 0; j < n2; ++j) {
            const Index k = assignment[j];
            permuted.values(j) = cur.values(k);
            Vector v = cur.vectors.col(k);
            const Complex ov = prev.col(j).adjoint() * v;
            if (std::abs(ov) > 0) v *= std::conj(ov) / std::abs(ov); // real-positive overlap gauge
            permuted.vectors.col(j) = v;
        }
        cur = std::move(permuted);
    }

    // Align the starting basis inside degenerate clusters with the first
    // matched step, so tracks are continuous from t_start onward.
    if (n_points > 1) {
        const double cluster_tol = 1e-10 * std::max(1.0, decomposed[0].values.cwiseAbs().maxCoeff());
        Index lo = 0;
        while (lo < n2) {
            Index hi = lo + 1;
            while (hi < n2 &&
                   std::abs(decomposed[0].values(lo) - decomposed[0].values(hi)) <= cluster_tol)
                ++hi;
            if (hi - lo > 1) {
                const Matrix base = decomposed[0].vectors.middleCols(lo, hi - lo);
                const Matrix target = decomposed[1].vectors.middleCols(lo, hi - lo);
                decomposed[0].vectors.middleCols(lo, hi - lo) = procrustes_align(base, target);
            }
            lo = hi;
        }
    }

    // Rank selection: a track is retained if it ever rises above the zero
    // threshold; retained tracks are ordered by their peak eigenvalue so the
    // ancilla dimension stays constant over the window.
    const double zero_threshold = options.rank_policy.zero_threshold_scale * double(d);
    RealVector peak = RealVector::Zero(n2);
    for (const auto& p : decomposed)
        peak = peak.cwiseMax(p.values);
    std::vector<Index> order(n2);
    std::iota(order.begin(), order.end(), Index(0));
    std::stable_sort(order.begin(), order.end(),
                     [&peak](Index a, Index b) { return peak(a) > peak(b); });

    Index rank = 0;
    if (options.rank_policy.mode == RankPolicy::Mode::kFixed) {
        rank = options.rank_policy.fixed_rank;
        if (rank < 1 || rank > n2) throw ValidationError("eigentrack: fixed rank out of range");
    } else {
        for (Index k : order)
            if (peak(k) > zero_threshold) ++rank;
        rank = std::max<Index>(rank, 1);
    }

    EigenTrack track;
    track.grid = grid;
    track.dim = d;
    track.rank = rank;
    track.crossings = std::move(crossings);
    track.eigenvalues.reserve(n_points);
    track.eigenvectors.reserve(n_points);
    for (Index i = 0; i < n_points; ++i) {
        RealVector vals(rank);
        Matrix vecs(n2, rank);
        for (Index r = 0; r < rank; ++r) {
            vals(r) = decomposed[i].values(order[r]);
            vecs.col(r) = decomposed[i].vectors.col(order[r]);
        }
        track.eigenvalues.push_back(std::move(vals));
        track.eigenvectors.push_back(std::move(vecs));
    }
    return track;
}

} // namespace dforge
