#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "dforge/presets.hpp"
#include "dforge/runner.hpp"
#include "dforge/tabular.hpp"
#include "test_helpers.hpp"

using namespace dforge;

namespace {

const char* kDephasingCompare = R"({
  "system": {"preset": "spin_boson", "params": {"gamma": 1.0}},
  "grid": {"t_start": 0.0, "t_end": 2.0, "n_steps": 2000},
  "pipeline": {"stages": ["dilate", "simulate", "compare"], "compare_tolerance": 1e-6},
  "output": {"directory": "out"}
})";

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_text(const std::string& text, const std::filesystem::path& dir, std::string& error) {
    const auto config = parse_config_text(text);
    return run_experiment(config, canonical_config_text(text), dir, error);
}

} // namespace

TEST_CASE("config: schema accepts the reference document and rejects unknown keys") {
    CHECK_NOTHROW(parse_config_text(kDephasingCompare));
    std::string bad = kDephasingCompare;
    bad.replace(bad.find("\"grid\""), 6, "\"grjd\"");
    CHECK_THROWS_AS(parse_config_text(bad), ValidationError);
    CHECK_THROWS_AS(parse_config_text(R"({"system": {"preset": "spin_boson"},
        "grid": {"t_end": 1.0, "n_steps": 10},
        "pipeline": {"stages": []}})"),
                    ValidationError); // empty stages
    CHECK_THROWS_AS(parse_config_text("not json"), ValidationError);
}

TEST_CASE("config: explicit generator block round-trips") {
    const char* text = R"({
      "system": {"dim": 2,
        "hamiltonian_terms": [{"matrix": [[[0.5,0],[0,0]],[[0,0],[-0.5,0]]],
                               "profile": {"kind": "constant", "params": {"value": 1.2}}}],
        "jump_terms": [{"matrix": [[[0,0],[1,0]],[[0,0],[0,0]]],
                        "profile": {"kind": "constant", "params": {"value": 2.0}}}]},
      "grid": {"t_start": 0.0, "t_end": 1.0, "n_steps": 100},
      "pipeline": {"stages": ["diagnose"]}
    })";
    const auto config = parse_config_text(text);
    const auto spec = config.build_spec();
    CHECK(spec.dim == 2);
    CHECK(spec.hamiltonian_terms.size() == 1);
    CHECK(spec.jump_terms.size() == 1);
    CHECK(spec.hamiltonian_at(0.0)(0, 0).real() == doctest::Approx(0.6));
}

TEST_CASE("config: preset catalog round-trips through validation") {
    for (const auto& info : presets::catalog()) {
        nlohmann::json doc;
        doc["system"]["preset"] = info.name;
        for (const auto& p : info.params) doc["system"]["params"][p.name] = p.default_value;
        doc["grid"] = {{"t_start", 0.0}, {"t_end", 1.0}, {"n_steps", 100}};
        doc["pipeline"]["stages"] = {"diagnose"};
        CHECK_NOTHROW(parse_config_text(doc.dump()));
    }
    // the catalog names the iconic systems and their conventions
    bool has_spin_boson = false;
    for (const auto& info : presets::catalog()) {
        if (info.name == "spin_boson") has_spin_boson = true;
        CHECK(!info.convention.empty());
    }
    CHECK(has_spin_boson);
}

TEST_CASE("overrides rewrite nested keys") {
    const std::string text = apply_overrides(kDephasingCompare, {"grid.n_steps=400",
                                                                 "system.params.gamma=0.5"});
    const auto config = parse_config_text(text);
    CHECK(config.grid.n_steps == 400);
    CHECK(config.preset_params.at("gamma") == 0.5);
}

TEST_CASE("canonical serialization and hashing are stable") {
    const std::string a = canonical_config_text(kDephasingCompare);
    const std::string b = canonical_config_text(a);
    CHECK(a == b);
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("runner: diagnose stage reports the divergent dephasing dilation") {
    const auto dir = std::filesystem::temp_directory_path() / "dforge_test_diag";
    std::filesystem::remove_all(dir);
    std::string error;
    const char* text = R"({
      "system": {"preset": "spin_boson", "params": {"gamma": 1.0}},
      "grid": {"t_start": 0.0, "t_end": 2.0, "n_steps": 1000},
      "pipeline": {"stages": ["diagnose"]}
    })";
    CHECK(run_text(text, dir, error) == kExitOk);
    const auto doc = nlohmann::json::parse(read_file(dir / "diagnosis.json"));
    CHECK(doc["diverges_at_zero"].get<bool>());
    CHECK(doc["tests_agree"].get<bool>());
    CHECK(std::filesystem::exists(dir / "manifest.json"));
}

TEST_CASE("runner: dilate/simulate/compare pipeline passes and writes outputs") {
    const auto dir = std::filesystem::temp_directory_path() / "dforge_test_run";
    std::filesystem::remove_all(dir);
    std::string error;
    REQUIRE(run_text(kDephasingCompare, dir, error) == kExitOk);
    CHECK(std::filesystem::exists(dir / "hamiltonian_path.tsv"));
    CHECK(std::filesystem::exists(dir / "hamiltonian_path.meta.json"));
    CHECK(std::filesystem::exists(dir / "reduced_path.tsv"));
    CHECK(std::filesystem::exists(dir / "comparison.json"));
    const auto doc = nlohmann::json::parse(read_file(dir / "comparison.json"));
    CHECK(doc["pass"].get<bool>());
    CHECK(doc["max_trace_distance"].get<double>() < 1e-6);
}

TEST_CASE("runner: impossible tolerance exits with the numerical code") {
    const auto dir = std::filesystem::temp_directory_path() / "dforge_test_tol";
    std::filesystem::remove_all(dir);
    std::string text = kDephasingCompare;
    text = apply_overrides(text, {"pipeline.compare_tolerance=1e-18"});
    std::string error;
    CHECK(run_text(text, dir, error) == kExitNumerical);
    CHECK(error.find("compare") != std::string::npos);
}

TEST_CASE("runner: byte-identical outputs across repeated runs") {
    const auto dir1 = std::filesystem::temp_directory_path() / "dforge_det_1";
    const auto dir2 = std::filesystem::temp_directory_path() / "dforge_det_2";
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
    std::string error;
    REQUIRE(run_text(kDephasingCompare, dir1, error) == kExitOk);
    REQUIRE(run_text(kDephasingCompare, dir2, error) == kExitOk);
    for (const char* name : {"hamiltonian_path.tsv", "reduced_path.tsv", "comparison.tsv",
                             "comparison.json", "config_resolved.json"}) {
        CHECK(read_file(dir1 / name) == read_file(dir2 / name));
    }
}

TEST_CASE("tabular: matrix paths round-trip losslessly") {
    const TimeGrid grid(0.0, 1.0, 7);
    std::vector<Matrix> path;
    for (Index i = 0; i < grid.size(); ++i)
        path.push_back(dforge::testing::random_matrix(2, 2, 700 + unsigned(i)));
    const auto file = std::filesystem::temp_directory_path() / "dforge_roundtrip.tsv";
    write_matrix_path(file, grid, path, "m");
    const auto data = read_matrix_path(file, 2, 2);
    REQUIRE(data.matrices.size() == path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        CHECK(data.times[i] == grid.time(Index(i)));
        CHECK(ops::approx_equal(data.matrices[i], path[i], 0.0)); // bit-exact at 17 digits
    }
}

TEST_CASE("cli binary: presets and validate subcommands") {
    const std::string binary = std::string(DFORGE_BINARY_DIR) + "/dilate-forge";
    if (!std::filesystem::exists(binary)) return; // binary not staged in this build layout
    CHECK(std::system((binary + " presets > /dev/null").c_str()) == 0);
    const auto cfg = std::filesystem::temp_directory_path() / "dforge_cli_cfg.json";
    {
        std::ofstream out(cfg);
        out << kDephasingCompare;
    }
    CHECK(std::system((binary + " validate " + cfg.string() + " > /dev/null").c_str()) == 0);
    // validation failure surfaces as exit code 2
    const auto bad = std::filesystem::temp_directory_path() / "dforge_cli_bad.json";
    {
        std::ofstream out(bad);
        out << "{\"nope\": 1}";
    }
    const int code = std::system((binary + " validate " + bad.string() + " 2> /dev/null").c_str());
    CHECK(WEXITSTATUS(code) == kExitValidation);
}
