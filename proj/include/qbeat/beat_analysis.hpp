#pragma once

#include <span>
#include <string>
#include <vector>

#include "qbeat/montecarlo.hpp"

namespace qbeat {

struct BeatPeak {
  double frequency_ghz = 0.0;
  double amplitude = 0.0;
  double uncertainty_ghz = 0.0;
};

/// Peaks of the detrended, Hann-tapered periodogram of a trace, ascending in
/// frequency. resolution_ghz is the natural bin width 1/t_max; interpolated
/// peak positions are finer than that for clean signals.
struct BeatSpectrum {
  std::vector<BeatPeak> peaks;
  double resolution_ghz = 0.0;
  std::string window = "hann";
};

BeatSpectrum extract_frequencies(std::span<const double> t_ns, std::span<const double> ps,
                                 int max_peaks = 8);
BeatSpectrum extract_frequencies(const BeatTrace& trace, int max_peaks = 8);

/// Exponential fit of the beat envelope |P_S(t) - c| to a exp(-t/T), with the
/// baseline c co-fitted.
struct DecayFit {
  double decay_time_ns = 0.0;
  double decay_time_stderr_ns = 0.0;
  double asymptote = 0.0;
  double asymptote_stderr = 0.0;
  double amplitude = 0.0;
  double residual_rms = 0.0;
  bool converged = false;
  /// Set when the fitted decay time exceeds the trace window; the numeric
  /// decay_time is then a bound, not a measurement.
  bool slower_than_window = false;
};

/// noise_floor drops envelope points whose magnitude is below it before
/// fitting (0 keeps everything). The BeatTrace overload derives the floor
/// from the per-point standard errors.
DecayFit fit_decay(std::span<const double> t_ns, std::span<const double> ps,
                   double noise_floor = 0.0);
DecayFit fit_decay(const BeatTrace& trace);

struct LevelEstimate {
  double level = 0.0;
  double stderr = 0.0;
};

/// Mean of ps_mean over the final window_fraction of the grid, with the
/// per-point standard errors propagated as if points were independent.
LevelEstimate steady_state_level(const BeatTrace& trace, double window_fraction = 0.25);

}  // namespace qbeat
