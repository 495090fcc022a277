// runner.cpp — Stage orchestration and output writing

#include "dforge/runner.hpp"

#include <chrono>
#include <fstream>
#include <json.hpp>

#include "dforge/diagnose.hpp"
#include "dforge/fixtures.hpp"
#include "dforge/presets.hpp"
#include "dforge/simulate.hpp"
#include "dforge/tabular.hpp"
#include "dforge/transforms.hpp"
#include "dforge/version.hpp"

namespace dforge {

using nlohmann::json;

namespace {

struct StageClock {
    RunManifest& manifest;
    std::string stage;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    ~StageClock() {
        const double s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        manifest.timings.push_back({stage, s});
    }
};

bool wants(const ExperimentConfig& config, Stage stage) {
    for (Stage s : config.stages)
        if (s == stage) return true;
    return false;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file);
    if (!out) throw ValidationError("cannot open " + file.string());
    out << text;
}

json diagnosis_json(const DivergenceReport& report) {
    json doc;
    doc["diverges_at_zero"] = report.diverges_at_zero;
    doc["eigenvalue_test"] = report.eigenvalue_test;
    doc["generator_test"] = report.generator_test;
    doc["tests_agree"] = report.tests_agree;
    doc["dissipative_generator_norm_at_zero"] = report.dissipative_generator_norm_at_zero;
    doc["max_h_norm_observed"] = report.max_h_norm_observed;
    json ev = json::array();
    for (const auto& z : report.zero_time_evidence)
        ev.push_back({{"track", z.track}, {"lambda0", z.lambda0}, {"lambda_dot0", z.lambda_dot0}});
    doc["zero_time_evidence"] = ev;
    json drops = json::array();
    for (const auto& rd : report.rank_drop_times)
        drops.push_back({{"t", rd.t}, {"track", rd.track}});
    doc["rank_drop_times"] = drops;
    return doc;
}

} // namespace

int run_experiment(const ExperimentConfig& config, const std::string& canonical_config,
                   const std::filesystem::path& out_dir, std::string& error,
                   RunManifest* manifest_out) {
    RunManifest manifest;
    manifest.config_hash = config_hash(canonical_config);
    manifest.tool_version = kVersion;
    std::string stage_context = "setup";

    try {
        std::filesystem::create_directories(out_dir);
        write_text(out_dir / "config_resolved.json", canonical_config);

        const LindbladSpec spec = config.build_spec();
        std::string convention = "custom generator";
        if (!config.preset.empty())
            for (const auto& info : presets::catalog())
                if (info.name == config.preset) convention = info.convention;

        std::optional<DivergenceReport> diagnosis;
        std::optional<PipelineResult> pipeline;
        std::optional<CutoffResult> clamped;
        std::optional<SimulationResult> simulated;
        std::optional<StatePath> reduced;

        // ---- diagnose
        if (wants(config, Stage::kDiagnose)) {
            stage_context = "diagnose";
            StageClock clock{manifest, stage_context};
            if (config.grid.t_start != 0.0)
                throw ValidationError("diagnose: grid.t_start must be 0");
            diagnosis = diagnose(spec, config.grid);
            if (!diagnosis->tests_agree)
                manifest.warnings.push_back("diagnose: divergence tests disagree; flagged for review");
        }

        // ---- dilate
        const bool need_dilate = wants(config, Stage::kDilate) || wants(config, Stage::kSimulate) ||
                                 wants(config, Stage::kCompare) || wants(config, Stage::kRescale);
        if (need_dilate) {
            stage_context = "dilate";
            StageClock clock{manifest, stage_context};
            const ChannelFamily family = propagate_channel(spec, config.grid);
            pipeline = dilate(family);
            const bool divergent =
                dissipative_remainder_norm(lindblad_superop(spec, config.grid.t_start), spec.dim) >
                1e-8;
            HamiltonianOptions hopts;
            hopts.divergent_at_start = divergent && config.grid.t_start == 0.0;
            hamiltonian_from_unitary(pipeline->dilation, hopts);
            if (!pipeline->track.crossings.empty())
                manifest.warnings.push_back(
                    "dilate: " + std::to_string(pipeline->track.crossings.size()) +
                    " flagged eigenvalue crossings");
            if (config.cutoff) {
                clamped = apply_cutoff(pipeline->dilation, *config.cutoff);
                if (clamped->any_clamped)
                    manifest.warnings.push_back(
                        "dilate: cutoff clamped H over [" + format_double(clamped->window_start) +
                        ", " + format_double(clamped->window_end) + "]");
            }
            if (wants(config, Stage::kDilate)) {
                const DilationPath& path = clamped ? clamped->path : pipeline->dilation;
                write_matrix_path(out_dir / "hamiltonian_path.tsv", path.grid, path.hamiltonians,
                                  "H", path.h_valid_from);
                json meta;
                meta["dim"] = path.dim;
                meta["ancilla_dim"] = path.rank;
                meta["first_reported_index"] = path.h_valid_from;
                meta["layout"] = "row-major re/im pairs; joint index (i, k) = i*R + k "
                                 "(system i, ancilla k); ancilla starts in |0><0|";
                meta["vectorization"] = "column-stacking";
                meta["convention"] = convention;
                write_text(out_dir / "hamiltonian_path.meta.json", meta.dump(2));
            }
        }

        if (diagnosis && pipeline) attach_hamiltonian_norms(*diagnosis, pipeline->dilation);
        if (diagnosis) {
            json doc = diagnosis_json(*diagnosis);
            doc["convention"] = convention;
            write_text(out_dir / "diagnosis.json", doc.dump(2));
        }

        // ---- rescale
        if (wants(config, Stage::kRescale)) {
            stage_context = "rescale";
            StageClock clock{manifest, stage_context};
            const RescaleMap map = rescale_time(pipeline->dilation, 1.0);
            const std::size_t n = map.h.params().size() / 2;
            std::vector<double> ts(map.h.params().begin(), map.h.params().begin() + n);
            std::vector<double> hs(map.h.params().begin() + n, map.h.params().end());
            std::vector<double> taus(map.tau.params().begin() + n, map.tau.params().end());
            write_columns(out_dir / "rescale.tsv", {"t", "h", "tau"}, {ts, hs, taus});
        }

        // ---- simulate
        if (wants(config, Stage::kSimulate) || wants(config, Stage::kCompare)) {
            stage_context = "simulate";
            StageClock clock{manifest, stage_context};
            const DensityMatrix rho0 = config.build_initial_state();
            if (config.perturbation) {
                // first-order corrected Hamiltonian, integrated on the fine grid
                PerturbationSpec pspec{spec, config.perturbation->generator,
                                       config.perturbation->delta};
                const PerturbedChannel pc = perturbative_channel(pspec, config.grid);
                std::vector<Matrix> choi1;
                choi1.reserve(pc.first_order.size());
                for (const auto& m : pc.first_order) choi1.push_back(reshuffle_matrix(m));
                const FirstOrderKraus k1 = kraus_first_order(pipeline->track, choi1);
                const std::vector<Matrix> h1 =
                    perturbative_dilation(pipeline->dilation, pipeline->kraus, k1);
                const double delta = config.perturbation->delta;
                const DilationPath& base = pipeline->dilation;
                SampledHamiltonian sh;
                sh.grid = base.grid;
                sh.dim = base.dim;
                sh.rank = base.rank;
                sh.first_valid = base.h_valid_from;
                sh.at = [&base, &h1, delta](Index i) {
                    return Matrix(base.hamiltonians[i] + delta * h1[i]);
                };
                Index s = sh.first_valid;
                if ((sh.grid.n_steps - s) % 2 != 0) ++s;
                simulated = evolve_dilated(sh, rho0, {}, base.unitaries[s]);
                reduced = simulated->reduced_path();
            } else if (clamped) {
                SampledHamiltonian sh = sampled_hamiltonian(clamped->path);
                if (config.cutoff->mode == CutoffPolicy::Mode::kPrefactorClamp) sh.first_valid = 0;
                simulated = evolve_dilated(sh, rho0);
                reduced = simulated->reduced_path();
            } else {
                reduced = reduced_dynamics(pipeline->dilation, rho0);
            }
            if (simulated && simulated->renormalizations > 0)
                manifest.warnings.push_back("simulate: " +
                                            std::to_string(simulated->renormalizations) +
                                            " re-unitarization events");
            if (wants(config, Stage::kSimulate)) {
                write_matrix_path(out_dir / "reduced_path.tsv", reduced->grid, reduced->states,
                                  "rho");
                json meta;
                meta["dim"] = spec.dim;
                meta["initial_state"] = config.initial_state;
                meta["convention"] = convention;
                write_text(out_dir / "reduced_path.meta.json", meta.dump(2));
            }
        }

        // ---- compare
        if (wants(config, Stage::kCompare)) {
            stage_context = "compare";
            StageClock clock{manifest, stage_context};
            const DensityMatrix rho0 = config.build_initial_state();
            const StatePath oracle = evolve_state_master(spec, rho0, reduced->grid);
            const ComparisonReport report = compare_paths(*reduced, oracle, config.compare_tolerance);
            json doc;
            doc["max_trace_distance"] = report.max_trace_distance;
            doc["tolerance"] = report.tolerance;
            doc["pass"] = report.pass;
            write_text(out_dir / "comparison.json", doc.dump(2));
            std::vector<double> ts;
            for (Index i = 0; i < report.grid.size(); ++i) ts.push_back(report.grid.time(i));
            write_columns(out_dir / "comparison.tsv", {"t", "trace_distance"},
                          {ts, report.trace_distances});
            if (!report.pass)
                throw NumericalError("compare: max trace distance " +
                                     format_double(report.max_trace_distance) +
                                     " beyond tolerance " + format_double(report.tolerance));
        }

        // ---- figures
        if (wants(config, Stage::kFigures)) {
            stage_context = "figures";
            StageClock clock{manifest, stage_context};
            if (config.preset == "spin_boson") {
                const double gamma = config.preset_params.count("gamma")
                                         ? config.preset_params.at("gamma")
                                         : 1.0;
                const double scale = fixtures::resolve_dephasing_rate_scale(gamma);
                const double decay = scale * gamma;
                std::vector<double> cutoffs = {5.0 * decay, 10.0 * decay, 50.0 * decay};
                if (config.cutoff) cutoffs = {config.cutoff->C};
                double t_c_min = config.grid.t_end;
                const auto fixture = fixtures::DilationFixture::dephasing(decay);
                for (double c : cutoffs)
                    t_c_min = std::min(
                        t_c_min, clamp_window_end([&fixture](double t) { return fixture.prefactor(t); },
                                                  c, 1e-12, config.grid.t_end));
                const double inset_end = std::min(0.1 * config.grid.t_end, 2000.0 * t_c_min);
                const Index inset_steps =
                    std::min<Index>(200000, std::max<Index>(2000, Index(40.0 * inset_end / t_c_min)));
                const TimeGrid inset(0.0, inset_end, inset_steps);
                const TimeGrid main(inset_end, config.grid.t_end, config.grid.n_steps);
                const auto curves = fixtures::decay_curves(decay, cutoffs, main, inset);
                std::vector<std::string> names = {"t", "exact"};
                for (double c : cutoffs) names.push_back("C_" + format_double(c));
                std::vector<std::vector<double>> cols;
                std::vector<double> ts;
                for (Index i = 0; i < main.size(); ++i) ts.push_back(main.time(i));
                cols.push_back(ts);
                cols.push_back(curves.exact_main);
                for (const auto& s : curves.survival_main) cols.push_back(s);
                write_columns(out_dir / "fig2_survival.tsv", names, cols);
                std::vector<std::vector<double>> icols;
                std::vector<double> its;
                for (Index i = 0; i < inset.size(); ++i) its.push_back(inset.time(i));
                icols.push_back(its);
                icols.push_back(curves.exact_inset);
                for (const auto& s : curves.survival_inset) icols.push_back(s);
                write_columns(out_dir / "fig2_inset.tsv", names, icols);
            } else if (config.preset == "rwa_driving") {
                const double gamma = config.preset_params.count("gamma")
                                         ? config.preset_params.at("gamma")
                                         : 1.0;
                const double omega0 = config.preset_params.count("omega0")
                                          ? config.preset_params.at("omega0")
                                          : 2.0;
                const auto table = fixtures::driving_function_table(gamma, omega0, config.grid);
                write_columns(out_dir / "fig3_functions.tsv", {"t", "h0_re", "f_re", "g_re"},
                              {table.t, table.h0_re, table.f_re, table.g_re});
            } else {
                manifest.warnings.push_back("figures: no figure dataset for this system");
            }
        }

        write_text(out_dir / "manifest.json", manifest.to_json());
        if (manifest_out) *manifest_out = manifest;
        return kExitOk;
    } catch (const ValidationError& e) {
        error = stage_context + ": " + e.what();
        if (manifest_out) *manifest_out = manifest;
        return kExitValidation;
    } catch (const NumericalError& e) {
        error = stage_context + ": " + e.what();
        if (manifest_out) *manifest_out = manifest;
        return kExitNumerical;
    }
}

} // namespace dforge
