#include "qbeat/run.hpp"

#include "qbeat/beat_analysis.hpp"
#include "qbeat/output.hpp"

namespace qbeat {

namespace {

PairHamiltonian selected_hamiltonian(ConfigSelector sel, const CrystalParams& params,
                                     const FieldSpec& field) {
  switch (sel) {
    case ConfigSelector::AA: return total_hamiltonian(PairConfiguration::AA, params, field);
    case ConfigSelector::BB: return total_hamiltonian(PairConfiguration::BB, params, field);
    case ConfigSelector::AB: return total_hamiltonian(PairConfiguration::AB, params, field);
    case ConfigSelector::Averaged: return averaged_hamiltonian(params, field);
  }
  throw std::logic_error("unreachable");
}

void emit_trace_with_analysis(const std::filesystem::path& dir, const std::string& stem,
                              const BeatTrace& trace, RunResult& result) {
  const auto trace_path = dir / (stem + ".csv");
  write_beat_trace_csv(trace_path, trace);
  result.outputs.push_back(trace_path);

  // Spectral and decay analysis need a reasonably long grid; very short
  // traces are emitted without the companion report.
  if (trace.t_ns.size() < 64) return;

  const BeatSpectrum spectrum = extract_frequencies(trace);
  const DecayFit fit = fit_decay(trace);
  const LevelEstimate steady = steady_state_level(trace);
  const auto analysis_path = dir / (stem + "_analysis.json");
  write_json(analysis_path, analysis_json(spectrum, fit, steady));
  result.outputs.push_back(analysis_path);
}

}  // namespace

RunResult run(const Scenario& scenario) {
  const std::filesystem::path dir(scenario.out_dir);
  std::filesystem::create_directories(dir);
  RunResult result;

  switch (scenario.run_kind) {
    case RunKind::Stationary: {
      StationaryReport report = stationary_report(
          selected_hamiltonian(*scenario.config, scenario.crystal, scenario.field));
      report.params = scenario.crystal;
      const auto csv_path = dir / "stationary.csv";
      write_stationary_csv(csv_path, std::span(&report, 1));
      result.outputs.push_back(csv_path);
      const auto json_path = dir / "stationary.json";
      write_json(json_path, stationary_report_json(report));
      result.outputs.push_back(json_path);
      break;
    }
    case RunKind::ProjectionSweep: {
      std::vector<StationaryReport> reports;
      if (*scenario.config == ConfigSelector::Averaged) {
        const Vec3 unit = scenario.sweep_direction.normalized();
        reports.reserve(scenario.sweep_b_tesla.size());
        for (const double b : scenario.sweep_b_tesla) {
          reports.push_back(
              stationary_report(averaged_hamiltonian(scenario.crystal, FieldSpec{unit * b})));
        }
      } else {
        const auto config = pair_configuration_from_string(to_string(*scenario.config));
        reports = projection_field_sweep(config, scenario.crystal, scenario.sweep_direction,
                                         scenario.sweep_b_tesla);
      }
      const auto csv_path = dir / "projections.csv";
      write_stationary_csv(csv_path, reports);
      result.outputs.push_back(csv_path);
      break;
    }
    case RunKind::Beats: {
      const BeatTrace trace =
          ensemble_beats(scenario.crystal, scenario.field, scenario.mc_params());
      emit_trace_with_analysis(dir, "trace", trace, result);
      break;
    }
    case RunKind::FieldSweep: {
      const Vec3 unit = scenario.sweep_direction.normalized();
      for (const double b : scenario.sweep_b_tesla) {
        const BeatTrace trace =
            ensemble_beats(scenario.crystal, FieldSpec{unit * b}, scenario.mc_params());
        emit_trace_with_analysis(dir, "trace_B" + format_double(b) + "T", trace, result);
      }
      break;
    }
    case RunKind::HoppingSweep: {
      for (const double tau_ps : scenario.sweep_tau_hop_ps) {
        const BeatTrace trace =
            ensemble_beats(scenario.crystal, scenario.field, scenario.mc_params(tau_ps));
        emit_trace_with_analysis(dir, "trace_tau" + format_double(tau_ps) + "ps", trace, result);
      }
      break;
    }
  }

  const auto manifest_path = dir / "manifest.json";
  write_json(manifest_path, manifest_json(scenario, result.outputs));
  result.outputs.push_back(manifest_path);
  return result;
}

}  // namespace qbeat
