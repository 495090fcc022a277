// presets.cpp — Preset constructors and the catalog

#include "dforge/presets.hpp"

namespace dforge::presets {

LindbladSpec spin_boson(const TimeProfile& gamma) {
    LindbladSpec spec;
    spec.dim = 2;
    // -g [sz,[sz,rho]] == 2g (sz rho sz - rho) == jump sz at rate 2g
    TimeProfile doubled = TimeProfile::polynomial({0.0}); // replaced below per kind
    switch (gamma.kind()) {
        case TimeProfile::Kind::kConstant:
            doubled = TimeProfile::constant(2.0 * gamma.params()[0]);
            break;
        case TimeProfile::Kind::kExponential:
            doubled = TimeProfile::exponential(2.0 * gamma.params()[0], gamma.params()[1],
                                               int(gamma.params()[2]));
            break;
        case TimeProfile::Kind::kSinusoidal:
            doubled = TimeProfile::sinusoidal(2.0 * gamma.params()[0], gamma.params()[1],
                                              gamma.params()[2]);
            break;
        case TimeProfile::Kind::kPolynomial: {
            auto c = gamma.params();
            for (auto& x : c) x *= 2.0;
            doubled = TimeProfile::polynomial(std::move(c));
            break;
        }
        case TimeProfile::Kind::kTabulated: {
            const std::size_t n = gamma.params().size() / 2;
            std::vector<double> ts(gamma.params().begin(), gamma.params().begin() + n);
            std::vector<double> vs(gamma.params().begin() + n, gamma.params().end());
            for (auto& x : vs) x *= 2.0;
            doubled = TimeProfile::tabulated(std::move(ts), std::move(vs));
            break;
        }
    }
    spec.jump_terms.push_back({ops::sigma_z(), doubled});
    return spec;
}

TimeProfile spin_boson_bath_rate(double g0, double b) {
    return TimeProfile::exponential(g0, -b, 1);
}

LindbladSpec amplitude_damping(double gamma, double omega0) {
    LindbladSpec spec;
    spec.dim = 2;
    if (omega0 != 0.0)
        spec.hamiltonian_terms.push_back({ops::sigma_z(), TimeProfile::constant(0.5 * omega0)});
    spec.jump_terms.push_back({ops::sigma_minus(), TimeProfile::constant(2.0 * gamma)});
    return spec;
}

LindbladSpec driven_damping(double gamma, double Omega) {
    LindbladSpec spec = amplitude_damping(gamma, 0.0);
    spec.hamiltonian_terms.push_back({ops::sigma_x(), TimeProfile::constant(Omega)});
    return spec;
}

LindbladSpec rwa_driving(double gamma, double omega0, double Omega) {
    LindbladSpec spec = amplitude_damping(gamma, omega0);
    spec.hamiltonian_terms.push_back({ops::sigma_x(), TimeProfile::sinusoidal(0.5 * Omega, omega0, 0.0)});
    spec.hamiltonian_terms.push_back(
        {ops::sigma_y(), TimeProfile::sinusoidal(0.5 * Omega, omega0, -0.5 * M_PI)});
    return spec;
}

LindbladSpec unitary_only(double omega0) {
    LindbladSpec spec;
    spec.dim = 2;
    spec.hamiltonian_terms.push_back({ops::sigma_z(), TimeProfile::constant(0.5 * omega0)});
    return spec;
}

std::vector<PresetInfo> catalog() {
    std::vector<PresetInfo> cat;
    cat.push_back({"spin_boson",
                   "single-qubit pure dephasing with a (possibly time-dependent) bath rate",
                   "rho' = -gamma(t) [sz, [sz, rho]]; coherences decay as exp(-4 int gamma)",
                   {{"gamma", "constant dephasing rate (use gamma0/bath_decay for the "
                              "non-Markovian t*exp(-b t) profile)", 1.0},
                    {"gamma0", "slope of the non-Markovian rate profile (optional)", 0.0},
                    {"bath_decay", "decay constant b of the non-Markovian profile (optional)", 1.0}}});
    cat.push_back({"amplitude_damping",
                   "two-level relaxation to the ground state",
                   "rho' = -i[(omega0/2) sz, rho] - gamma({s+ s-, rho} - 2 s- rho s+); "
                   "excited population decays as exp(-2 gamma t)",
                   {{"gamma", "decay rate", 1.0}, {"omega0", "level splitting", 0.0}}});
    cat.push_back({"driven_damping",
                   "amplitude damping with a constant transverse drive",
                   "rho' = -i Omega [sx, rho] - gamma({s+ s-, rho} - 2 s- rho s+)",
                   {{"gamma", "decay rate", 1.0}, {"Omega", "drive strength (<< gamma)", 0.05}}});
    cat.push_back({"rwa_driving",
                   "amplitude damping with a resonant circularly polarized drive",
                   "rho' = -i[(omega0/2) sz + (Omega/2)(cos(omega0 t) sx + sin(omega0 t) sy), rho]"
                   " - gamma({s+ s-, rho} - 2 s- rho s+)",
                   {{"gamma", "decay rate", 1.0},
                    {"omega0", "level splitting / drive frequency", 2.0},
                    {"Omega", "drive strength (<< gamma)", 0.05}}});
    cat.push_back({"unitary_only",
                   "closed qubit precession (no dissipation)",
                   "rho' = -i[(omega0/2) sz, rho]",
                   {{"omega0", "level splitting", 1.0}}});
    return cat;
}

LindbladSpec make(const std::string& name, const std::map<std::string, double>& params) {
    auto get = [&params](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    auto require_known = [&params](std::initializer_list<const char*> known) {
        for (const auto& [k, v] : params) {
            bool ok = false;
            for (const char* n : known)
                if (k == n) ok = true;
            if (!ok) throw ValidationError("preset: unknown parameter '" + k + "'");
        }
    };
    if (name == "spin_boson") {
        require_known({"gamma", "gamma0", "bath_decay"});
        const double g0 = get("gamma0", 0.0);
        if (g0 != 0.0) return spin_boson(spin_boson_bath_rate(g0, get("bath_decay", 1.0)));
        return spin_boson(TimeProfile::constant(get("gamma", 1.0)));
    }
    if (name == "amplitude_damping") {
        require_known({"gamma", "omega0"});
        return amplitude_damping(get("gamma", 1.0), get("omega0", 0.0));
    }
    if (name == "driven_damping") {
        require_known({"gamma", "Omega"});
        return driven_damping(get("gamma", 1.0), get("Omega", 0.05));
    }
    if (name == "rwa_driving") {
        require_known({"gamma", "omega0", "Omega"});
        return rwa_driving(get("gamma", 1.0), get("omega0", 2.0), get("Omega", 0.05));
    }
    if (name == "unitary_only") {
        require_known({"omega0"});
        return unitary_only(get("omega0", 1.0));
    }
    throw ValidationError("preset: unknown name '" + name + "'");
}

} // namespace dforge::presets
