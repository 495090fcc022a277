// cutoff.hpp — Bounded approximations of divergent dilation Hamiltonians

#pragma once

#include <functional>

#include "dforge/dilation.hpp"

namespace dforge {

struct CutoffPolicy {
    enum class Mode { kPrefactorClamp, kNormClamp };
    double C = 0.0; // operator-norm cap, 1/time
    Mode mode = Mode::kPrefactorClamp;
};

// H(t) = h(t) X with ||X|| = 1; h carries magnitude and sign.
struct PrefactorSplit {
    bool factorable = false;
    Matrix X;
    std::vector<double> h; // per grid point
};

// Detects a single time-dependent scalar factor: H(t)/||H(t)|| constant to tol.
PrefactorSplit split_prefactor(const DilationPath& path, double tol = 1e-8);

struct CutoffResult {
    DilationPath path;
    bool any_clamped = false;
    double window_start = 0.0; // affected time window (clamped region)
    double window_end = 0.0;
};

// prefactor mode: replace h by sign(h) * C wherever |h| > C (requires a
// factorable path); norm mode: rescale H to norm C wherever ||H|| > C.
CutoffResult apply_cutoff(const DilationPath& path, const CutoffPolicy& policy,
                          double factor_tol = 1e-8);

// Solve h(t) = C on [t_lo, t_hi] by bisection (|h| decreasing towards C);
// converges to 1e-10 * (t_hi - t_lo).
double clamp_window_end(const std::function<double(double)>& h, double C, double t_lo, double t_hi);

} // namespace dforge
