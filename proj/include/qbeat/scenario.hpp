#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qbeat/crystal.hpp"
#include "qbeat/montecarlo.hpp"

namespace qbeat {

enum class RunKind { Stationary, Beats, FieldSweep, ProjectionSweep, HoppingSweep };

std::string to_string(RunKind k);
RunKind run_kind_from_string(const std::string& s);

/// Which pair Hamiltonian a stationary run diagonalizes.
enum class ConfigSelector { AA, BB, AB, Averaged };

std::string to_string(ConfigSelector c);
ConfigSelector config_selector_from_string(const std::string& s);

/// A fully validated run description. Quantities are stored exactly as they
/// appear in the file (tau in ps, field in T) so that emit/parse round-trips
/// are value-exact; unit conversions happen when the run is assembled.
struct Scenario {
  RunKind run_kind = RunKind::Stationary;
  CrystalParams crystal;
  std::optional<ConfigSelector> config;
  FieldSpec field;

  Vec3 sweep_direction = Vec3::UnitX();
  std::vector<double> sweep_b_tesla;
  std::vector<double> sweep_tau_hop_ps;

  double tau_hop_ps = 150.0;
  int n_traj = 10000;
  double t_max_ns = 0.0;  // 0 = resolve default (5 ns at zero field, 20 ns otherwise)
  double dt_ns = 0.01;
  std::uint64_t master_seed = 12345;
  std::string out_dir = "out";

  MonteCarloParams mc_params() const;
  MonteCarloParams mc_params(double tau_hop_ps_override) const;

  /// Applies defaults that depend on other fields and checks the per-run-kind
  /// requirements. Throws ValidationError.
  void finalize();

  bool operator==(const Scenario& other) const;
};

/// Parse a scenario from flat key-value text or JSON (detected from content).
/// A manifest file (JSON with a "scenario" object) is accepted transparently,
/// which is what makes runs replayable from their manifests.
Scenario parse_scenario(const std::filesystem::path& file);
Scenario parse_scenario_text(const std::string& text, const std::string& source_name);
Scenario parse_scenario_json(const std::string& text, const std::string& source_name);

/// Canonical key-value form; parse_scenario_text(emit_scenario(s)) == s.
std::string emit_scenario(const Scenario& s);

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace qbeat
