// profiles.hpp — Scalar time profiles for rates and drive envelopes

#pragma once

#include <string>
#include <vector>

#include "dforge/common.hpp"

namespace dforge {

// Deterministic scalar function of time, evaluable at any t in its domain and
// exactly integrable on [t0, t1]. Tabulated profiles interpolate linearly and
// reject extrapolation.
class TimeProfile {
  public:
    enum class Kind { kConstant, kExponential, kSinusoidal, kPolynomial, kTabulated };

    TimeProfile() : TimeProfile(constant(0.0)) {}

    static TimeProfile constant(double value);
    // amplitude * t^power * exp(rate * t), power in {0, 1, 2}
    static TimeProfile exponential(double amplitude, double rate, int power = 0);
    // amplitude * cos(omega * t + phase)
    static TimeProfile sinusoidal(double amplitude, double omega, double phase = 0.0);
    // sum_k coeffs[k] * t^k
    static TimeProfile polynomial(std::vector<double> coeffs);
    static TimeProfile tabulated(std::vector<double> times, std::vector<double> values);

    double operator()(double t) const;
    double integral(double t0, double t1) const;

    Kind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }
    static std::string kind_name(Kind k);

  private:
    Kind kind_ = Kind::kConstant;
    // constant: {value}; exponential: {amplitude, rate, power};
    // sinusoidal: {amplitude, omega, phase}; polynomial: coeffs;
    // tabulated: times then values (split at params_.size()/2)
    std::vector<double> params_;

    double antiderivative(double t) const;
};

} // namespace dforge
