// config.hpp — Experiment configuration: schema validation, overrides, and
// the run manifest

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dforge/cutoff.hpp"
#include "dforge/lindblad.hpp"

namespace dforge {

enum class Stage { kDilate, kSimulate, kDiagnose, kCompare, kRescale, kFigures };

std::string stage_name(Stage stage);

struct ExperimentConfig {
    // system: preset name + params, or an explicit generator
    std::string preset;                      // empty when explicit
    std::map<std::string, double> preset_params;
    std::optional<LindbladSpec> explicit_spec;

    TimeGrid grid;
    std::vector<Stage> stages;

    std::optional<CutoffPolicy> cutoff;
    struct Perturbation {
        double delta = 0.0;
        LindbladSpec generator;
    };
    std::optional<Perturbation> perturbation;

    // pipeline-block options
    double compare_tolerance = 1e-6;
    std::string initial_state = "plus"; // plus | mixed | ground

    std::filesystem::path output_directory = "out";
    std::vector<std::string> formats = {"tsv", "json"};

    LindbladSpec build_spec() const;
    DensityMatrix build_initial_state() const;
};

// Parse + schema-validate a config document (unknown keys rejected).
ExperimentConfig parse_config_file(const std::filesystem::path& file);
ExperimentConfig parse_config_text(const std::string& text);

// Apply "a.b.c=value" overrides onto the raw document before parsing.
std::string apply_overrides(const std::string& text,
                            const std::vector<std::string>& overrides);

// Canonical re-serialization (sorted keys, 17 significant digits).
std::string canonical_config_text(const std::string& text);

// FNV-1a over the canonical serialization.
std::string config_hash(const std::string& canonical_text);

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct RunManifest {
    std::string config_hash;
    std::string tool_version;
    std::vector<StageTiming> timings;
    std::vector<std::string> warnings;

    std::string to_json() const;
};

} // namespace dforge
