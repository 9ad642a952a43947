#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "qbeat/output.hpp"
#include "qbeat/run.hpp"
#include "qbeat/scenario.hpp"

using namespace qbeat;

namespace {

std::filesystem::path temp_dir() {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path() /
             ("qbeat_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::create_directories(dir);
  return dir;
}

std::filesystem::path write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  return path;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("scenario parsing") {
  SUBCASE("preset expansion") {
    const Scenario s = parse_scenario_text(
        "run_kind = stationary\npreset = rubrene\nconfig = AB\n", "<test>");
    CHECK(s.crystal.d_cm1 == 0.0555);
    CHECK(s.crystal.e_cm1 == -0.0040);
    CHECK(s.crystal.theta_deg == 31.0);
    CHECK(s.crystal.g == 2.0);
    CHECK(s.config == ConfigSelector::AB);
  }

  SUBCASE("empty file lists the required keys") {
    CHECK_THROWS_WITH_AS(parse_scenario_text("", "<test>"),
                         "<test>: missing required key(s): run_kind, preset (or D_cm1, E_cm1, "
                         "theta_deg)",
                         ValidationError);
  }

  SUBCASE("negative hopping time is rejected") {
    try {
      parse_scenario_text(
          "run_kind = beats\npreset = rubrene\ntau_hop_ps = -5\n", "<test>");
      FAIL("expected ValidationError");
    } catch (const ValidationError& err) {
      CHECK(std::string(err.what()).find("tau_hop must be positive") != std::string::npos);
    }
  }

  SUBCASE("unknown keys are hard errors with a line number and a suggestion") {
    try {
      parse_scenario_text(
          "run_kind = beats\npreset = rubrene\ntau_hop = 150\n", "<test>");
      FAIL("expected ValidationError");
    } catch (const ValidationError& err) {
      const std::string msg = err.what();
      CHECK(msg.find("<test>:3") != std::string::npos);
      CHECK(msg.find("unknown key 'tau_hop'") != std::string::npos);
      CHECK(msg.find("did you mean 'tau_hop_ps'") != std::string::npos);
    }
  }

  SUBCASE("non-finite numbers are rejected") {
    CHECK_THROWS_AS(parse_scenario_text(
                        "run_kind = stationary\npreset = rubrene\nconfig = AB\nD_cm1 = nan\n",
                        "<test>"),
                    ValidationError);
  }

  SUBCASE("field shortcuts") {
    const Scenario s = parse_scenario_text(
        "run_kind = beats\npreset = rubrene\ntau_hop_ps = 150\nB_T = y 0.3\n", "<test>");
    CHECK(s.field.b_tesla == Vec3(0.0, 0.3, 0.0));
    CHECK(s.t_max_ns == 20.0);  // field run default window
  }

  SUBCASE("zero-field default window") {
    const Scenario s = parse_scenario_text(
        "run_kind = beats\npreset = rubrene\ntau_hop_ps = 150\n", "<test>");
    CHECK(s.t_max_ns == 5.0);
  }

  SUBCASE("duplicate keys are rejected") {
    CHECK_THROWS_AS(
        parse_scenario_text("run_kind = beats\nrun_kind = beats\npreset = rubrene\n"
                            "tau_hop_ps = 1\n",
                            "<test>"),
        ValidationError);
  }

  SUBCASE("sweeps must be ascending") {
    CHECK_THROWS_AS(parse_scenario_text("run_kind = hopping-sweep\npreset = rubrene\n"
                                        "sweep_tau_hop_ps = 150 5\n",
                                        "<test>"),
                    ValidationError);
  }

  SUBCASE("JSON form with arrays") {
    const Scenario s = parse_scenario_json(
        R"({"run_kind": "beats", "preset": "rubrene", "tau_hop_ps": 150,
            "B_T": [0, 0.3, 0], "n_traj": 500, "master_seed": 42})",
        "<test>");
    CHECK(s.field.b_tesla == Vec3(0.0, 0.3, 0.0));
    CHECK(s.n_traj == 500);
    CHECK(s.master_seed == 42);
  }
}

TEST_CASE("scenario round trip through emit") {
  std::vector<std::string> sources = {
      "run_kind = stationary\npreset = rubrene\nconfig = averaged\nB_T = z 0.25\n",
      "run_kind = beats\nD_cm1 = 0.0712\nE_cm1 = 0.001\ntheta_deg = -24.5\ng = 1.9\n"
      "tau_hop_ps = 37.5\nn_traj = 123\nt_max_ns = 7.25\ndt_ns = 0.025\nmaster_seed = "
      "18446744073709551615\nout_dir = somewhere/else\n",
      "run_kind = projection-sweep\npreset = rubrene\nconfig = AB\nfield_dir = x\n"
      "sweep_B_T = 0 0.01 0.1 1\n",
      "run_kind = hopping-sweep\npreset = rubrene\nsweep_tau_hop_ps = 5 150 10000\n",
      "run_kind = field-sweep\npreset = rubrene\ntau_hop_ps = 150\nfield_dir = 0 1 1\n"
      "sweep_B_T = 0.1 0.3\n",
  };
  for (const auto& text : sources) {
    const Scenario parsed = parse_scenario_text(text, "<test>");
    const Scenario round = parse_scenario_text(emit_scenario(parsed), "<emit>");
    CHECK(round == parsed);
  }
}

TEST_CASE("stationary run emits the published AB table") {
  const auto dir = temp_dir();
  Scenario s = parse_scenario_text("run_kind = stationary\npreset = rubrene\nconfig = AB\n",
                                   "<test>");
  s.out_dir = (dir / "out").string();
  const RunResult result = run(s);
  REQUIRE(result.outputs.size() == 3);  // csv, json, manifest

  const std::string csv = read_file(result.outputs[0]);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "field_T,state_index,energy_GHz,proj_prob");
  int rows = 0;
  std::vector<std::pair<double, double>> table;  // (energy, prob)
  std::string line;
  while (std::getline(lines, line)) {
    ++rows;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double field_t, energy, prob;
    int index;
    fields >> field_t >> index >> energy >> prob;
    table.emplace_back(energy, prob);
  }
  CHECK(rows == 9);
  const std::vector<std::pair<double, double>> expected = {
      {0.87, 0.33}, {1.34, 0.07}, {-2.21, 0.07}, {-0.43, 0.52}};
  for (const auto& [energy, prob] : expected) {
    const bool found = std::any_of(table.begin(), table.end(), [&](const auto& row) {
      return std::abs(row.first - energy) < 0.01 && std::abs(row.second - prob) < 0.01;
    });
    CHECK(found);
  }
}

TEST_CASE("hopping sweep emits one trace per tau plus the manifest") {
  const auto dir = temp_dir();
  Scenario s = parse_scenario_text(
      "run_kind = hopping-sweep\npreset = rubrene\nsweep_tau_hop_ps = 5 150 10000\n"
      "n_traj = 20\nt_max_ns = 0.3\ndt_ns = 0.01\n",
      "<test>");
  s.out_dir = (dir / "sweep").string();
  const RunResult result = run(s);

  int traces = 0;
  for (const auto& p : result.outputs) {
    if (p.extension() == ".csv") ++traces;
  }
  CHECK(traces == 3);
  CHECK(result.outputs.back().filename() == "manifest.json");
  CHECK(std::filesystem::exists(dir / "sweep" / "trace_tau150ps.csv"));
}

TEST_CASE("manifest replay reproduces byte-identical traces") {
  const auto dir = temp_dir();
  Scenario s = parse_scenario_text(
      "run_kind = beats\npreset = rubrene\ntau_hop_ps = 150\nB_T = y 0.3\n"
      "n_traj = 64\nt_max_ns = 1\ndt_ns = 0.01\nmaster_seed = 31415\n",
      "<test>");
  s.out_dir = (dir / "first").string();
  const RunResult first = run(s);
  const auto manifest = dir / "first" / "manifest.json";
  REQUIRE(std::filesystem::exists(manifest));

  Scenario replay = parse_scenario(manifest);
  replay.out_dir = (dir / "second").string();
  const RunResult second = run(replay);

  CHECK(read_file(dir / "first" / "trace.csv") == read_file(dir / "second" / "trace.csv"));
  const Scenario replay_identity = parse_scenario(manifest);
  CHECK(replay_identity.out_dir == s.out_dir);

  SUBCASE("replay through the CLI binary when available") {
    const char* cli = std::getenv("QBEAT_CLI");
    if (cli == nullptr) return;
    const auto third = dir / "third";
    const std::string cmd =
        std::string("\"") + cli + "\" beats \"" + manifest.string() + "\" --out \"" +
        third.string() + "\" > /dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(read_file(dir / "first" / "trace.csv") == read_file(third / "trace.csv"));
  }
}

TEST_CASE("beat trace CSV carries metadata and the grid") {
  const auto dir = temp_dir();
  BeatTrace trace;
  trace.t_ns = {0.0, 0.01, 0.02};
  trace.ps_mean = {1.0, 0.9, 0.8};
  trace.ps_stderr = {0.0, 0.001, 0.002};
  trace.params = CrystalParams::rubrene();
  trace.field.b_tesla = Vec3(0.0, 0.3, 0.0);
  trace.mc.n_traj = 10;
  const auto path = dir / "trace.csv";
  write_beat_trace_csv(path, trace);
  const std::string text = read_file(path);
  CHECK(text.find("# n_traj = 10") != std::string::npos);
  CHECK(text.find("# B_T = 0 0.3 0") != std::string::npos);
  CHECK(text.find("t_ns,ps_mean,ps_stderr\n0,1,0\n") != std::string::npos);
}
