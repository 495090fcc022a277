// presets.hpp — Canned single-qubit systems with pinned rate conventions

#pragma once

#include <map>
#include <string>

#include "dforge/lindblad.hpp"

namespace dforge::presets {

// Pure dephasing, rho' = -gamma(t) [sz, [sz, rho]]; realized as jump sz with
// rate 2*gamma(t). Coherences decay as exp(-4 * integral gamma).
LindbladSpec spin_boson(const TimeProfile& gamma);

// Non-Markovian rate profile gamma(t) = g0 * t * exp(-b t); gamma(0) = 0.
TimeProfile spin_boson_bath_rate(double g0, double b);

// rho' = -i[(omega0/2) sz, rho] - gamma ({s+ s-, rho} - 2 s- rho s+);
// realized as jump s- with rate 2*gamma. Excited population decays as
// exp(-2 gamma t), coherences as exp(-(i omega0 + gamma) t).
LindbladSpec amplitude_damping(double gamma, double omega0 = 0.0);

// Amplitude damping (omega0 = 0) plus a constant drive -i Omega [sx, rho].
LindbladSpec driven_damping(double gamma, double Omega);

// Amplitude damping plus resonant circular drive (post rotating-wave form):
// H(t) = (omega0/2) sz + (Omega/2)(cos(omega0 t) sx + sin(omega0 t) sy).
LindbladSpec rwa_driving(double gamma, double omega0, double Omega);

// Closed qubit, H = (omega0/2) sz, no dissipation.
LindbladSpec unitary_only(double omega0);

struct ParamSpec {
    std::string name;
    std::string doc;
    double default_value;
};

struct PresetInfo {
    std::string name;
    std::string description;
    std::string convention; // the generating master equation, spelled out
    std::vector<ParamSpec> params;
};

std::vector<PresetInfo> catalog();

// Build a preset by name; throws ValidationError for unknown names/params.
LindbladSpec make(const std::string& name, const std::map<std::string, double>& params);

} // namespace dforge::presets
