// dilate_forge.cpp — Command-line front end: run experiment configs,
// list presets, validate configs

#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dforge/presets.hpp"
#include "dforge/runner.hpp"
#include "dforge/version.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw dforge::ValidationError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void apply_thread_cap() {
    if (const char* cap = std::getenv("DILATE_FORGE_THREADS")) {
        const int n = std::atoi(cap);
        if (n > 0) Eigen::setNbThreads(n);
    }
}

} // namespace

int main(int argc, char** argv) {
    apply_thread_cap();
    CLI::App app{"dilate-forge: time-dependent unitary dilations of open-system dynamics"};
    app.set_version_flag("--version", dforge::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;

    CLI::App* run = app.add_subcommand("run", "execute the stages of an experiment config");
    run->add_option("config", config_path, "path to the config document")->required();
    run->add_option("--override", overrides, "key.path=value overrides (repeatable)");
    run->add_option("--out", out_dir, "output directory (default: from the config)");

    CLI::App* presets_cmd = app.add_subcommand("presets", "list preset systems and conventions");

    CLI::App* validate = app.add_subcommand("validate", "schema-check a config document");
    validate->add_option("config", config_path, "path to the config document")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*presets_cmd) {
            for (const auto& info : dforge::presets::catalog()) {
                std::cout << info.name << "\n  " << info.description << "\n  convention: "
                          << info.convention << "\n  parameters:";
                for (const auto& p : info.params)
                    std::cout << " " << p.name << " (default " << p.default_value << ")";
                std::cout << "\n";
            }
            return dforge::kExitOk;
        }

        std::string text = slurp(config_path);
        if (*run && !overrides.empty()) text = dforge::apply_overrides(text, overrides);
        const std::string canonical = dforge::canonical_config_text(text);
        dforge::ExperimentConfig config = dforge::parse_config_text(text);

        if (*validate) {
            std::cout << "ok " << dforge::config_hash(canonical) << "\n";
            return dforge::kExitOk;
        }

        if (!out_dir.empty()) config.output_directory = out_dir;
        std::string error;
        const int code =
            dforge::run_experiment(config, canonical, config.output_directory, error);
        if (code != dforge::kExitOk) std::cerr << "error (" << code << "): " << error << "\n";
        return code;
    } catch (const dforge::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return dforge::kExitValidation;
    } catch (const dforge::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return dforge::kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
