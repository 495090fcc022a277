// runner.hpp — Batch execution of configured pipeline stages

#pragma once

#include "dforge/config.hpp"

namespace dforge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

// Executes the requested stages in dependency order and writes the output
// files (Hamiltonian path, reduced-state path, diagnosis/comparison reports,
// figure datasets, resolved config, manifest) into out_dir. Returns an exit
// code; error text is appended to `error` when nonzero.
int run_experiment(const ExperimentConfig& config, const std::string& canonical_config,
                   const std::filesystem::path& out_dir, std::string& error,
                   RunManifest* manifest_out = nullptr);

} // namespace dforge
