#include "qbeat/beat_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "qbeat/constants.hpp"

namespace qbeat {

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p *= 2;
  return p;
}

}  // namespace

BeatSpectrum extract_frequencies(std::span<const double> t_ns, std::span<const double> ps,
                                 int max_peaks) {
  if (t_ns.size() != ps.size()) throw std::invalid_argument("grid/trace size mismatch");
  if (t_ns.size() < 64) {
    throw std::invalid_argument("trace too short for spectral analysis: need at least 64 points");
  }
  validate_uniform_grid(t_ns);
  if (max_peaks < 1) throw std::invalid_argument("max_peaks must be positive");

  const std::size_t n = t_ns.size();
  const double dt = t_ns[1] - t_ns[0];
  const double t_span = t_ns.back();

  // Detrend and taper.
  const double mean = std::accumulate(ps.begin(), ps.end(), 0.0) / static_cast<double>(n);
  std::vector<double> windowed(n);
  double window_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w =
        0.5 * (1.0 - std::cos(constants::two_pi * static_cast<double>(k) / (static_cast<double>(n) - 1.0)));
    windowed[k] = (ps[k] - mean) * w;
    window_sum += w;
  }

  // Zero-pad for sub-bin peak localisation.
  const std::size_t n_pad = next_pow2(8 * n);
  windowed.resize(n_pad, 0.0);

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, windowed);

  const std::size_t n_half = n_pad / 2;
  std::vector<double> power(n_half + 1);
  for (std::size_t j = 0; j <= n_half; ++j) power[j] = std::norm(spectrum[j]);

  std::vector<double> sorted(power.begin() + 1, power.end());
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median_floor = sorted[sorted.size() / 2];
  const double threshold = 5.0 * median_floor;

  const double df = 1.0 / (static_cast<double>(n_pad) * dt);

  struct Candidate {
    double freq, power, amplitude;
  };
  std::vector<Candidate> candidates;
  for (std::size_t j = 2; j + 1 <= n_half; ++j) {
    if (power[j] <= threshold) continue;
    if (!(power[j] > power[j - 1] && power[j] >= power[j + 1])) continue;
    // Parabolic interpolation on log power.
    const double la = std::log(std::max(power[j - 1], 1e-300));
    const double lb = std::log(power[j]);
    const double lc = std::log(std::max(power[j + 1], 1e-300));
    const double denom = la - 2.0 * lb + lc;
    double delta = 0.0;
    if (denom < 0.0) delta = std::clamp(0.5 * (la - lc) / denom, -0.5, 0.5);
    const double freq = (static_cast<double>(j) + delta) * df;
    const double peak_power = std::exp(lb - 0.25 * (la - lc) * delta);
    const double amplitude = 2.0 * std::sqrt(peak_power) / window_sum;
    candidates.push_back({freq, peak_power, amplitude});
  }

  // Keep the strongest candidate within each natural resolution bin and drop
  // window sidelobes of stronger kept peaks: the Hann skirt starts 31 dB
  // down and falls at 18 dB per octave, so ripples near a peak are far more
  // than 50x weaker and anything -60 dB is skirt wherever it sits.
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.power > b.power; });
  const double min_separation = 1.0 / t_span;
  std::vector<Candidate> kept;
  for (const auto& c : candidates) {
    const bool shadowed = std::any_of(kept.begin(), kept.end(), [&](const Candidate& k) {
      if (std::abs(k.freq - c.freq) < min_separation) return true;
      if (std::abs(k.freq - c.freq) < 40.0 * min_separation && k.power > 50.0 * c.power) {
        return true;
      }
      return k.power > 1e6 * c.power;
    });
    if (!shadowed) kept.push_back(c);
    if (static_cast<int>(kept.size()) >= max_peaks) break;
  }
  std::sort(kept.begin(), kept.end(),
            [](const Candidate& a, const Candidate& b) { return a.freq < b.freq; });

  BeatSpectrum spec;
  spec.resolution_ghz = 1.0 / t_span;
  for (const auto& c : kept) {
    spec.peaks.push_back({c.freq, c.amplitude, std::max(df, 0.5 / t_span)});
  }
  return spec;
}

BeatSpectrum extract_frequencies(const BeatTrace& trace, int max_peaks) {
  return extract_frequencies(trace.t_ns, trace.ps_mean, max_peaks);
}

namespace {

std::vector<double> moving_average(std::span<const double> y, int half_width) {
  std::vector<double> out(y.size());
  const int n = static_cast<int>(y.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half_width);
    const int hi = std::min(n - 1, i + half_width);
    double sum = 0.0;
    for (int j = lo; j <= hi; ++j) sum += y[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

struct Samples {
  std::vector<double> t;
  std::vector<double> y;
};

/// Beat amplitude by demodulation: the trace is cut into windows of one beat
/// period, each window is linearly detrended (which removes the drifting
/// baseline) and projected onto the beat tone. Exact for a e^{-t/T} cos when
/// T spans many periods, and insensitive to other well-separated tones.
Samples demodulated_amplitudes(std::span<const double> t, std::span<const double> ps,
                               double beat_ghz) {
  Samples s;
  const double dt = t[1] - t[0];
  const auto window = static_cast<std::size_t>(std::lround(1.0 / (beat_ghz * dt)));
  if (window < 4) return s;

  for (std::size_t begin = 0; begin + window <= t.size(); begin += window) {
    const double n = static_cast<double>(window);
    const double sx = n * (n - 1.0) / 2.0;
    const double sxx = (n - 1.0) * n * (2.0 * n - 1.0) / 6.0;
    double sy = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < window; ++k) {
      sy += ps[begin + k];
      sxy += static_cast<double>(k) * ps[begin + k];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;

    Complex acc = 0.0;
    for (std::size_t k = 0; k < window; ++k) {
      const double detrended =
          ps[begin + k] - (intercept + slope * static_cast<double>(k));
      acc += detrended * std::polar(1.0, -constants::two_pi * beat_ghz * t[begin + k]);
    }
    s.t.push_back(t[begin + window / 2]);
    s.y.push_back(2.0 * std::abs(acc) / n);
  }
  return s;
}

/// Dominant beat frequency for the envelope fit; sub-0.1 GHz content is the
/// envelope itself, not a beat.
double dominant_beat_frequency(std::span<const double> t, std::span<const double> ps) {
  if (t.size() < 64) return 0.0;
  const BeatSpectrum spec = extract_frequencies(t, ps, 10);
  double best_amp = 0.0;
  double best_freq = 0.0;
  for (const auto& p : spec.peaks) {
    if (p.frequency_ghz < std::max(0.1, 4.0 / t.back()) ) continue;
    if (p.amplitude > best_amp) {
      best_amp = p.amplitude;
      best_freq = p.frequency_ghz;
    }
  }
  return best_freq;
}

struct LmResult {
  Eigen::VectorXd p;
  Eigen::VectorXd sigma;
  double rms = 0.0;
  bool converged = false;
};

/// Small dense Levenberg-Marquardt with numeric Jacobian.
LmResult levenberg_marquardt(
    std::size_t m, Eigen::VectorXd init,
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& fill_residuals,
    const std::function<void(Eigen::VectorXd&)>& clamp) {
  const int np = static_cast<int>(init.size());
  LmResult result;
  result.p = std::move(init);
  if (m < static_cast<std::size_t>(np) + 1) return result;

  Eigen::VectorXd residuals(m), trial_res(m);
  fill_residuals(result.p, residuals);
  double ssr = residuals.squaredNorm();
  double mu = 1e-3;
  Eigen::MatrixXd jac(m, np);

  auto numeric_jacobian = [&](const Eigen::VectorXd& at, const Eigen::VectorXd& base) {
    Eigen::VectorXd pert(m);
    for (int j = 0; j < np; ++j) {
      const double h = std::max(1e-9, 1e-6 * std::abs(at(j)));
      Eigen::VectorXd plus = at;
      plus(j) += h;
      fill_residuals(plus, pert);
      jac.col(j) = (pert - base) / h;
    }
  };

  for (int iter = 0; iter < 200; ++iter) {
    numeric_jacobian(result.p, residuals);
    const Eigen::VectorXd grad = jac.transpose() * residuals;
    const Eigen::MatrixXd jtj = jac.transpose() * jac;

    bool stepped = false;
    double improvement = 0.0;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal() += mu * jtj.diagonal().cwiseMax(1e-12);
      Eigen::VectorXd trial = result.p + damped.ldlt().solve(-grad);
      clamp(trial);
      fill_residuals(trial, trial_res);
      const double trial_ssr = trial_res.squaredNorm();
      if (trial_ssr < ssr) {
        improvement = (ssr - trial_ssr) / std::max(ssr, 1e-300);
        result.p = trial;
        residuals = trial_res;
        ssr = trial_ssr;
        mu = std::max(mu * 0.3, 1e-12);
        stepped = true;
        break;
      }
      mu *= 4.0;
    }
    if (!stepped || improvement < 1e-12) break;
  }

  result.converged = true;
  result.rms = std::sqrt(ssr / static_cast<double>(m));

  numeric_jacobian(result.p, residuals);
  const double dof = static_cast<double>(m) - np;
  const double var = dof > 0.0 ? ssr / dof : 0.0;
  const Eigen::MatrixXd cov =
      (jac.transpose() * jac + 1e-300 * Eigen::MatrixXd::Identity(np, np)).inverse() * var;
  result.sigma.resize(np);
  for (int j = 0; j < np; ++j) result.sigma(j) = std::sqrt(std::max(0.0, cov(j, j)));
  return result;
}

double log_linear_rate(const Samples& s) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    if (s.y[i] <= 0.0) continue;
    const double ly = std::log(s.y[i]);
    sx += s.t[i];
    sy += ly;
    sxx += s.t[i] * s.t[i];
    sxy += s.t[i] * ly;
    ++m;
  }
  if (m < 2) return 0.0;
  const double mm = static_cast<double>(m);
  const double denom = mm * sxx - sx * sx;
  return denom != 0.0 ? std::max(0.0, -(mm * sxy - sx * sy) / denom) : 0.0;
}

constexpr double k_rate_floor = 1e-6;  // 1/ns; caps reported decay times at 1e6 ns

}  // namespace

DecayFit fit_decay(std::span<const double> t_ns, std::span<const double> ps,
                   double noise_floor) {
  if (t_ns.size() != ps.size()) throw std::invalid_argument("grid/trace size mismatch");
  if (t_ns.size() < 16) throw std::invalid_argument("trace too short for a decay fit");

  const std::size_t n = t_ns.size();
  const double t_span = t_ns.back() - t_ns.front();

  const std::size_t tail_begin = n - std::max<std::size_t>(n / 4, 2);
  double tail_mean = 0.0;
  for (std::size_t i = tail_begin; i < n; ++i) tail_mean += ps[i];
  tail_mean /= static_cast<double>(n - tail_begin);
  double tail_var = 0.0;
  for (std::size_t i = tail_begin; i < n; ++i) {
    tail_var += (ps[i] - tail_mean) * (ps[i] - tail_mean);
  }
  const double tail_sem =
      std::sqrt(tail_var / std::max<std::size_t>(n - tail_begin - 1, 1)) /
      std::sqrt(static_cast<double>(n - tail_begin));

  const std::vector<double> smoothed = moving_average(ps, 2);
  const double beat_ghz = dominant_beat_frequency(t_ns, ps);
  Samples amps;
  if (beat_ghz > 0.0) amps = demodulated_amplitudes(t_ns, ps, beat_ghz);
  if (noise_floor > 0.0) {
    Samples filtered;
    for (std::size_t i = 0; i < amps.t.size(); ++i) {
      if (amps.y[i] >= noise_floor) {
        filtered.t.push_back(amps.t[i]);
        filtered.y.push_back(amps.y[i]);
      }
    }
    amps = std::move(filtered);
  }

  DecayFit fit;

  if (amps.t.size() >= 4) {
    // Oscillatory trace: single-exponential fit of the demodulated beat
    // amplitude. Detrending removed the baseline, so the asymptote comes
    // from the trace tail.
    const double k0 = log_linear_rate(amps);
    const double a0 = *std::max_element(amps.y.begin(), amps.y.end());
    Eigen::VectorXd init(2);
    init << a0, k0;
    const auto lm = levenberg_marquardt(
        amps.t.size(), init,
        [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
          for (std::size_t i = 0; i < amps.t.size(); ++i) {
            r(static_cast<Eigen::Index>(i)) = amps.y[i] - p(0) * std::exp(-p(1) * amps.t[i]);
          }
        },
        [](Eigen::VectorXd& p) {
          p(0) = std::max(p(0), 0.0);
          p(1) = std::max(p(1), 0.0);
        });
    if (!lm.converged) return fit;
    const double k = lm.p(1);
    fit.decay_time_ns = 1.0 / std::max(k, k_rate_floor);
    fit.decay_time_stderr_ns =
        k > k_rate_floor ? lm.sigma(1) / (k * k) : fit.decay_time_ns;
    fit.amplitude = lm.p(0);
    fit.asymptote = tail_mean;
    fit.asymptote_stderr = tail_sem;
    fit.residual_rms = lm.rms;
    fit.converged = true;
  } else {
    // Monotone relaxation: fit the rectified smoothed signal with the
    // baseline as a third parameter.
    Samples all;
    all.t.assign(t_ns.begin(), t_ns.end());
    all.y.assign(smoothed.begin(), smoothed.end());
    Eigen::VectorXd init(3);
    init << std::abs(all.y.front() - tail_mean), 1.0 / std::max(t_span / 4.0, 1e-6), tail_mean;
    const auto lm = levenberg_marquardt(
        all.t.size(), init,
        [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
          for (std::size_t i = 0; i < all.t.size(); ++i) {
            r(static_cast<Eigen::Index>(i)) =
                std::abs(all.y[i] - p(2)) - p(0) * std::exp(-p(1) * all.t[i]);
          }
        },
        [](Eigen::VectorXd& p) {
          p(0) = std::max(p(0), 0.0);
          p(1) = std::max(p(1), 0.0);
        });
    if (!lm.converged) return fit;
    const double k = lm.p(1);
    fit.decay_time_ns = 1.0 / std::max(k, k_rate_floor);
    fit.decay_time_stderr_ns =
        k > k_rate_floor ? lm.sigma(1) / (k * k) : fit.decay_time_ns;
    fit.amplitude = lm.p(0);
    fit.asymptote = lm.p(2);
    fit.asymptote_stderr = lm.sigma(2);
    fit.residual_rms = lm.rms;
    fit.converged = true;
  }

  fit.slower_than_window = fit.decay_time_ns > t_span;
  return fit;
}

DecayFit fit_decay(const BeatTrace& trace) {
  double mean_stderr = 0.0;
  if (!trace.ps_stderr.empty()) {
    mean_stderr = std::accumulate(trace.ps_stderr.begin(), trace.ps_stderr.end(), 0.0) /
                  static_cast<double>(trace.ps_stderr.size());
  }
  return fit_decay(trace.t_ns, trace.ps_mean, 3.0 * mean_stderr);
}

LevelEstimate steady_state_level(const BeatTrace& trace, double window_fraction) {
  if (!(window_fraction > 0.0) || window_fraction > 0.5) {
    throw std::invalid_argument("window_fraction must lie in (0, 0.5]");
  }
  const std::size_t n = trace.ps_mean.size();
  if (n == 0) throw std::invalid_argument("empty trace");
  const auto window =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(window_fraction * n)));

  LevelEstimate est;
  double var_sum = 0.0;
  for (std::size_t i = n - window; i < n; ++i) {
    est.level += trace.ps_mean[i];
    var_sum += trace.ps_stderr[i] * trace.ps_stderr[i];
  }
  est.level /= static_cast<double>(window);
  est.stderr = std::sqrt(var_sum) / static_cast<double>(window);
  return est;
}

}  // namespace qbeat
