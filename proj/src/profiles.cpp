// profiles.cpp — TimeProfile evaluation and exact integrals

#include "dforge/profiles.hpp"

#include <algorithm>
#include <cmath>

namespace dforge {

TimeProfile TimeProfile::constant(double value) {
    TimeProfile p;
    p.kind_ = Kind::kConstant;
    p.params_ = {value};
    return p;
}

TimeProfile TimeProfile::exponential(double amplitude, double rate, int power) {
    if (power < 0 || power > 2)
        throw ValidationError("TimeProfile::exponential: power must be 0, 1 or 2");
    TimeProfile p;
    p.kind_ = Kind::kExponential;
    p.params_ = {amplitude, rate, double(power)};
    return p;
}

TimeProfile TimeProfile::sinusoidal(double amplitude, double omega, double phase) {
    TimeProfile p;
    p.kind_ = Kind::kSinusoidal;
    p.params_ = {amplitude, omega, phase};
    return p;
}

TimeProfile TimeProfile::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    TimeProfile p;
    p.kind_ = Kind::kPolynomial;
    p.params_ = std::move(coeffs);
    return p;
}

TimeProfile TimeProfile::tabulated(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size() || times.size() < 2)
        throw ValidationError("TimeProfile::tabulated: need >= 2 matching samples");
    if (!std::is_sorted(times.begin(), times.end()))
        throw ValidationError("TimeProfile::tabulated: times must be increasing");
    TimeProfile p;
    p.kind_ = Kind::kTabulated;
    p.params_ = std::move(times);
    p.params_.insert(p.params_.end(), values.begin(), values.end());
    return p;
}

std::string TimeProfile::kind_name(Kind k) {
    switch (k) {
        case Kind::kConstant: return "constant";
        case Kind::kExponential: return "exponential";
        case Kind::kSinusoidal: return "sinusoidal";
        case Kind::kPolynomial: return "polynomial";
        case Kind::kTabulated: return "tabulated";
    }
    return "?";
}

double TimeProfile::operator()(double t) const {
    switch (kind_) {
        case Kind::kConstant:
            return params_[0];
        case Kind::kExponential: {
            const double a = params_[0], b = params_[1];
            const int p = int(params_[2]);
            double tp = 1.0;
            for (int i = 0; i < p; ++i) tp *= t;
            return a * tp * std::exp(b * t);
        }
        case Kind::kSinusoidal:
            return params_[0] * std::cos(params_[1] * t + params_[2]);
        case Kind::kPolynomial: {
            double acc = 0.0;
            for (auto it = params_.rbegin(); it != params_.rend(); ++it) acc = acc * t + *it;
            return acc;
        }
        case Kind::kTabulated: {
            const std::size_t n = params_.size() / 2;
            const double* ts = params_.data();
            const double* vs = params_.data() + n;
            if (t < ts[0] - 1e-12 || t > ts[n - 1] + 1e-12)
                throw ValidationError("TimeProfile::tabulated: evaluation outside table domain");
            t = std::clamp(t, ts[0], ts[n - 1]);
            const auto hi = std::upper_bound(ts, ts + n, t);
            std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(hi - ts, 1), n - 1);
            const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
            return vs[i - 1] * (1.0 - w) + vs[i] * w;
        }
    }
    return 0.0;
}

double TimeProfile::antiderivative(double t) const {
    switch (kind_) {
        case Kind::kConstant:
            return params_[0] * t;
        case Kind::kExponential: {
            const double a = params_[0], b = params_[1];
            const int p = int(params_[2]);
            if (b == 0.0) return a * std::pow(t, p + 1) / (p + 1);
            const double e = std::exp(b * t);
            if (p == 0) return a * e / b;
            if (p == 1) return a * e * (t / b - 1.0 / (b * b));
            return a * e * (t * t / b - 2.0 * t / (b * b) + 2.0 / (b * b * b));
        }
        case Kind::kSinusoidal: {
            const double a = params_[0], w = params_[1], ph = params_[2];
            if (w == 0.0) return a * std::cos(ph) * t;
            return a * std::sin(w * t + ph) / w;
        }
        case Kind::kPolynomial: {
            double acc = 0.0;
            for (std::size_t k = params_.size(); k-- > 0;)
                acc = acc * t + params_[k] / double(k + 1);
            return acc * t;
        }
        case Kind::kTabulated:
            break; // handled in integral()
    }
    return 0.0;
}

double TimeProfile::integral(double t0, double t1) const {
    if (kind_ != Kind::kTabulated) return antiderivative(t1) - antiderivative(t0);
    if (t1 < t0) return -integral(t1, t0);
    // exact integral of the piecewise-linear interpolant
    const std::size_t n = params_.size() / 2;
    const double* ts = params_.data();
    const double* vs = params_.data() + n;
    if (t0 < ts[0] - 1e-12 || t1 > ts[n - 1] + 1e-12)
        throw ValidationError("TimeProfile::tabulated: integration outside table domain");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double lo = std::max(t0, ts[i]), hi = std::min(t1, ts[i + 1]);
        if (hi <= lo) continue;
        acc += 0.5 * ((*this)(lo) + (*this)(hi)) * (hi - lo);
    }
    return acc;
}

} // namespace dforge
