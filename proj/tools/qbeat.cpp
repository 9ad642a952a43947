#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qbeat/output.hpp"
#include "qbeat/run.hpp"

namespace {

struct CliOverrides {
  std::optional<std::string> scenario_file;
  std::optional<std::string> preset;
  std::optional<std::uint64_t> seed;
  std::optional<int> ntraj;
  std::optional<std::string> out_dir;
  std::optional<std::string> config;
  std::optional<std::string> field;
  std::optional<std::string> dir;
  std::optional<std::string> sweep_b;
  std::optional<std::string> sweep_tau;
  std::optional<double> tau_hop_ps;
  std::optional<double> t_max_ns;
  std::optional<double> dt_ns;
};

void add_common_options(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("scenario", o.scenario_file,
                  "Scenario file (key-value text, JSON, or a run manifest)");
  cmd->add_option("--preset", o.preset, "Crystal preset (rubrene)");
  cmd->add_option("--seed", o.seed, "Master RNG seed");
  cmd->add_option("--ntraj", o.ntraj, "Trajectory count");
  cmd->add_option("--out", o.out_dir, "Output directory");
  cmd->add_option("--config", o.config, "Pair configuration: AA, BB, AB or averaged");
  cmd->add_option("--field", o.field, "Field, tesla: 'x|y|z magnitude' or 'bx by bz'");
  cmd->add_option("--dir", o.dir, "Sweep field direction: x, y, z or 'ux uy uz'");
  cmd->add_option("--sweep-b", o.sweep_b, "Field sweep magnitudes, tesla (space separated)");
  cmd->add_option("--sweep-tau-ps", o.sweep_tau, "Hopping-time sweep values, ps");
  cmd->add_option("--tau-hop-ps", o.tau_hop_ps, "Exciton hopping time, ps");
  cmd->add_option("--tmax-ns", o.t_max_ns, "Trace length, ns");
  cmd->add_option("--dt-ns", o.dt_ns, "Trace grid step, ns");
}

qbeat::Scenario build_scenario(qbeat::RunKind kind, const CliOverrides& o) {
  using qbeat::ValidationError;

  std::string text;
  if (o.scenario_file) {
    const qbeat::Scenario from_file = qbeat::parse_scenario(*o.scenario_file);
    if (from_file.run_kind != kind) {
      throw ValidationError("scenario file is a '" + qbeat::to_string(from_file.run_kind) +
                            "' run; invoke the matching subcommand");
    }
    text = qbeat::emit_scenario(from_file);
  } else {
    text = "run_kind = " + qbeat::to_string(kind) + "\n";
    if (!o.preset) {
      throw ValidationError("either a scenario file or --preset is required");
    }
  }

  // Overrides are appended as scenario keys so they go through the same
  // validation as file input.
  auto drop_key = [&text](const std::string& key) {
    std::string filtered;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind(key + " =", 0) != 0) filtered += line + "\n";
    }
    text = std::move(filtered);
  };
  auto set_key = [&](const std::string& key, const std::string& value) {
    drop_key(key);
    text += key + " = " + value + "\n";
  };

  if (o.preset) {
    drop_key("D_cm1");
    drop_key("E_cm1");
    drop_key("theta_deg");
    drop_key("g");
    set_key("preset", *o.preset);
  }
  if (o.seed) set_key("master_seed", std::to_string(*o.seed));
  if (o.ntraj) set_key("n_traj", std::to_string(*o.ntraj));
  if (o.out_dir) set_key("out_dir", *o.out_dir);
  if (o.config) set_key("config", *o.config);
  if (o.field) set_key("B_T", *o.field);
  if (o.dir) set_key("field_dir", *o.dir);
  if (o.sweep_b) set_key("sweep_B_T", *o.sweep_b);
  if (o.sweep_tau) set_key("sweep_tau_hop_ps", *o.sweep_tau);
  if (o.tau_hop_ps) set_key("tau_hop_ps", qbeat::format_double(*o.tau_hop_ps));
  if (o.t_max_ns) set_key("t_max_ns", qbeat::format_double(*o.t_max_ns));
  if (o.dt_ns) set_key("dt_ns", qbeat::format_double(*o.dt_ns));

  return qbeat::parse_scenario_text(text, o.scenario_file.value_or("<command line>"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triplet-pair spin evolution and fluorescence quantum beat simulator"};
  app.require_subcommand(1);

  struct Sub {
    qbeat::RunKind kind;
    CLI::App* cmd;
    CliOverrides overrides;
  };
  std::vector<Sub> subs;
  subs.push_back({qbeat::RunKind::Stationary,
                  app.add_subcommand("stationary", "Stationary states and singlet projections"),
                  {}});
  subs.push_back({qbeat::RunKind::Beats,
                  app.add_subcommand("beats", "Ensemble-averaged quantum beat trace"),
                  {}});
  subs.push_back({qbeat::RunKind::FieldSweep,
                  app.add_subcommand("sweep-field", "Beat traces across field magnitudes"),
                  {}});
  subs.push_back({qbeat::RunKind::HoppingSweep,
                  app.add_subcommand("sweep-hopping", "Beat traces across hopping times"),
                  {}});
  subs.push_back({qbeat::RunKind::ProjectionSweep,
                  app.add_subcommand("projections", "Singlet projections vs field magnitude"),
                  {}});
  for (auto& sub : subs) add_common_options(sub.cmd, sub.overrides);

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& sub : subs) {
      if (!sub.cmd->parsed()) continue;
      const qbeat::Scenario scenario = build_scenario(sub.kind, sub.overrides);
      const qbeat::RunResult result = qbeat::run(scenario);
      for (const auto& path : result.outputs) {
        std::cout << path.string() << "\n";
      }
      return 0;
    }
  } catch (const qbeat::ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
