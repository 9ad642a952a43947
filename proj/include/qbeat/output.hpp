#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "qbeat/beat_analysis.hpp"
#include "qbeat/montecarlo.hpp"
#include "qbeat/scenario.hpp"
#include "qbeat/stationary.hpp"

namespace qbeat {

inline constexpr std::string_view version = "0.1.0";

/// Trace CSV: '#'-prefixed metadata lines, then `t_ns,ps_mean,ps_stderr`.
/// All numbers use shortest round-trip formatting so identical runs produce
/// byte-identical files.
void write_beat_trace_csv(const std::filesystem::path& path, const BeatTrace& trace);

/// Stationary series CSV: `field_T,state_index,energy_GHz,proj_prob`.
void write_stationary_csv(const std::filesystem::path& path,
                          std::span<const StationaryReport> reports);

nlohmann::json stationary_report_json(const StationaryReport& report);

/// {frequencies: [...], decay_time_ns, asymptote, flags, ...} per trace.
nlohmann::json analysis_json(const BeatSpectrum& spectrum, const DecayFit& fit,
                             const LevelEstimate& steady);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// Run manifest: tool version, the fully resolved scenario and the list of
/// emitted files. Written last, as the commit marker of a successful run;
/// feeding it back to the CLI reproduces the run.
nlohmann::json manifest_json(const Scenario& scenario,
                             std::span<const std::filesystem::path> outputs);

}  // namespace qbeat
