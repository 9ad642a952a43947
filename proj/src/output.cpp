#include "qbeat/output.hpp"

#include <fstream>

namespace qbeat {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);  // binary: byte-identical across platforms
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::string field_string(const FieldSpec& field) {
  return format_double(field.b_tesla.x()) + " " + format_double(field.b_tesla.y()) + " " +
         format_double(field.b_tesla.z());
}

}  // namespace

void write_beat_trace_csv(const std::filesystem::path& path, const BeatTrace& trace) {
  std::ofstream out = open_for_write(path);
  out << "# generator = qbeat " << version << "\n";
  out << "# D_cm1 = " << format_double(trace.params.d_cm1) << "\n";
  out << "# E_cm1 = " << format_double(trace.params.e_cm1) << "\n";
  out << "# theta_deg = " << format_double(trace.params.theta_deg) << "\n";
  out << "# g = " << format_double(trace.params.g) << "\n";
  out << "# B_T = " << field_string(trace.field) << "\n";
  out << "# tau_hop_ps = " << format_double(trace.mc.tau_hop_ns * 1000.0) << "\n";
  out << "# n_traj = " << trace.mc.n_traj << "\n";
  out << "# master_seed = " << trace.mc.master_seed << "\n";
  out << "t_ns,ps_mean,ps_stderr\n";
  for (std::size_t i = 0; i < trace.t_ns.size(); ++i) {
    out << format_double(trace.t_ns[i]) << "," << format_double(trace.ps_mean[i]) << ","
        << format_double(trace.ps_stderr[i]) << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_stationary_csv(const std::filesystem::path& path,
                          std::span<const StationaryReport> reports) {
  std::ofstream out = open_for_write(path);
  out << "field_T,state_index,energy_GHz,proj_prob\n";
  for (const auto& report : reports) {
    const std::string field = format_double(report.field.magnitude());
    for (int i = 0; i < 9; ++i) {
      out << field << "," << i << "," << format_double(report.states[i].energy_ghz) << ","
          << format_double(report.states[i].probability) << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

nlohmann::json stationary_report_json(const StationaryReport& report) {
  nlohmann::json states = nlohmann::json::array();
  for (int i = 0; i < 9; ++i) {
    states.push_back({{"index", i},
                      {"energy_GHz", report.states[i].energy_ghz},
                      {"amplitude", report.states[i].amplitude},
                      {"proj_prob", report.states[i].probability},
                      {"cluster", report.states[i].cluster}});
  }
  nlohmann::json doc;
  doc["configuration"] =
      report.configuration ? to_string(*report.configuration) : std::string("averaged");
  doc["B_T"] = {report.field.b_tesla.x(), report.field.b_tesla.y(), report.field.b_tesla.z()};
  doc["states"] = std::move(states);
  return doc;
}

nlohmann::json analysis_json(const BeatSpectrum& spectrum, const DecayFit& fit,
                             const LevelEstimate& steady) {
  nlohmann::json freqs = nlohmann::json::array();
  for (const auto& p : spectrum.peaks) {
    freqs.push_back({{"frequency_GHz", p.frequency_ghz},
                     {"amplitude", p.amplitude},
                     {"uncertainty_GHz", p.uncertainty_ghz}});
  }
  nlohmann::json flags = nlohmann::json::array();
  if (!fit.converged) flags.push_back("fit_not_converged");
  if (fit.slower_than_window) flags.push_back("slower_than_window");

  nlohmann::json doc;
  doc["frequencies"] = std::move(freqs);
  doc["frequency_resolution_GHz"] = spectrum.resolution_ghz;
  doc["decay_time_ns"] = fit.decay_time_ns;
  doc["decay_time_stderr_ns"] = fit.decay_time_stderr_ns;
  doc["asymptote"] = fit.asymptote;
  doc["fit_residual_rms"] = fit.residual_rms;
  doc["steady_state_level"] = steady.level;
  doc["steady_state_stderr"] = steady.stderr;
  doc["flags"] = std::move(flags);
  return doc;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out = open_for_write(path);
  out << doc.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

nlohmann::json scenario_json(const Scenario& s) {
  nlohmann::json doc;
  doc["run_kind"] = to_string(s.run_kind);
  doc["D_cm1"] = s.crystal.d_cm1;
  doc["E_cm1"] = s.crystal.e_cm1;
  doc["theta_deg"] = s.crystal.theta_deg;
  doc["g"] = s.crystal.g;
  if (s.config) doc["config"] = to_string(*s.config);
  if (!s.field.is_zero()) {
    doc["B_T"] = {s.field.b_tesla.x(), s.field.b_tesla.y(), s.field.b_tesla.z()};
  }
  if (s.sweep_direction != Vec3::UnitX()) {
    doc["field_dir"] = {s.sweep_direction.x(), s.sweep_direction.y(), s.sweep_direction.z()};
  }
  if (!s.sweep_b_tesla.empty()) doc["sweep_B_T"] = s.sweep_b_tesla;
  if (!s.sweep_tau_hop_ps.empty()) doc["sweep_tau_hop_ps"] = s.sweep_tau_hop_ps;
  doc["tau_hop_ps"] = s.tau_hop_ps;
  doc["n_traj"] = s.n_traj;
  doc["t_max_ns"] = s.t_max_ns;
  doc["dt_ns"] = s.dt_ns;
  doc["master_seed"] = s.master_seed;
  doc["out_dir"] = s.out_dir;
  return doc;
}

}  // namespace

nlohmann::json manifest_json(const Scenario& scenario,
                             std::span<const std::filesystem::path> outputs) {
  nlohmann::json doc;
  doc["tool"] = "qbeat";
  doc["version"] = std::string(version);
  doc["scenario"] = scenario_json(scenario);
  nlohmann::json files = nlohmann::json::array();
  for (const auto& p : outputs) files.push_back(p.filename().string());
  doc["outputs"] = std::move(files);
  return doc;
}

}  // namespace qbeat
