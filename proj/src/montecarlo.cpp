#include "qbeat/montecarlo.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qbeat/constants.hpp"

namespace qbeat {

void MonteCarloParams::validate() const {
  if (!(tau_hop_ns > 0.0) || !std::isfinite(tau_hop_ns)) {
    throw ValidationError("tau_hop must be positive");
  }
  if (n_traj < 1) throw ValidationError("n_traj must be at least 1");
  if (!(t_max_ns > 0.0) || !std::isfinite(t_max_ns)) {
    throw ValidationError("t_max must be positive");
  }
  if (!(dt_ns > 0.0) || !(dt_ns <= t_max_ns)) {
    throw ValidationError("dt must satisfy 0 < dt <= t_max");
  }
}

double HopTrajectory::total_dwell_ns() const {
  double sum = 0.0;
  for (const auto& s : segments) sum += s.dwell_ns;
  return sum;
}

void sample_trajectory(SplitMix64& rng, const MonteCarloParams& mc, HopTrajectory& out) {
  out.segments.clear();
  const double tau = mc.dwell_mean_ns();
  double cumulative = 0.0;
  for (int n = 1; cumulative < mc.t_max_ns; ++n) {
    const PairConfiguration config =
        (n % 2 == 0) ? PairConfiguration::AB
                     : (rng.coin() ? PairConfiguration::AA : PairConfiguration::BB);
    const double dwell = rng.exponential(tau);
    out.segments.push_back({config, dwell});
    cumulative += dwell;
  }
}

HopTrajectory sample_trajectory(SplitMix64& rng, const MonteCarloParams& mc) {
  mc.validate();
  HopTrajectory traj;
  sample_trajectory(rng, mc, traj);
  return traj;
}

PairEvolutionCache::PairEvolutionCache(const CrystalParams& params, const FieldSpec& field)
    : params_(params), field_(field) {
  const Vec9c singlet = singlet_state();
  for (PairConfiguration c :
       {PairConfiguration::AA, PairConfiguration::BB, PairConfiguration::AB}) {
    const int i = static_cast<int>(c);
    dec_[i] = decompose(total_hamiltonian(c, params, field));
    singlet_eig_[i] = dec_[i].eigenvectors.adjoint() * singlet;
  }
}

namespace {

Vec9c phase_vector(const Vec9& eigenvalues_ghz, double t_ns) {
  Vec9c ph;
  for (int i = 0; i < 9; ++i) {
    ph(i) = std::polar(1.0, -constants::two_pi * eigenvalues_ghz(i) * t_ns);
  }
  return ph;
}

[[noreturn]] void throw_coverage(double t_ns, double coverage_ns) {
  std::ostringstream msg;
  msg << "grid point t = " << t_ns << " ns lies beyond the trajectory coverage of " << coverage_ns
      << " ns";
  throw std::invalid_argument(msg.str());
}

/// Shared trajectory walk. The cumulative state is advanced segment by
/// segment; grid points inside a segment are evaluated in that segment's
/// eigenbasis, with the phase vector updated incrementally by one grid step.
void trace_into(const HopTrajectory& traj, const PairEvolutionCache& cache,
                std::span<const double> grid, std::span<double> out) {
  const std::size_t n = grid.size();
  const double dt = n >= 2 ? grid[1] - grid[0] : 0.0;
  constexpr double boundary_tol = 1e-9;

  Vec9c psi = singlet_state();
  std::size_t g = 0;
  double seg_start = 0.0;

  for (std::size_t si = 0; si < traj.segments.size() && g < n; ++si) {
    const auto& seg = traj.segments[si];
    const SpectralDecomposition& dec = cache.dec(seg.config);
    const Vec9c& s = cache.singlet_in_eigenbasis(seg.config);
    const Vec9c w = dec.eigenvectors.adjoint() * psi;
    const Vec9c u = s.conjugate().cwiseProduct(w);

    const double seg_end = seg_start + seg.dwell_ns;
    const bool last = si + 1 == traj.segments.size();
    const double limit = last ? seg_end + boundary_tol : seg_end;

    Vec9c ph;
    bool fresh = true;
    Vec9c step;
    while (g < n && grid[g] < limit) {
      if (fresh) {
        ph = phase_vector(dec.eigenvalues, grid[g] - seg_start);
        step = phase_vector(dec.eigenvalues, dt);
        fresh = false;
      } else {
        ph = ph.cwiseProduct(step);
      }
      out[g] = grid[g] == 0.0 ? 1.0 : std::norm(Complex(u.cwiseProduct(ph).sum()));
      ++g;
    }
    if (g >= n) return;

    psi.noalias() = dec.eigenvectors * phase_vector(dec.eigenvalues, seg.dwell_ns).cwiseProduct(w);
    seg_start = seg_end;
  }

  if (g < n) throw_coverage(grid[g], seg_start);
}

}  // namespace

Vec9c evolve_state(const HopTrajectory& traj, const PairEvolutionCache& cache, double t_ns) {
  if (!(t_ns >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  Vec9c psi = singlet_state();
  double seg_start = 0.0;
  for (const auto& seg : traj.segments) {
    const SpectralDecomposition& dec = cache.dec(seg.config);
    const Vec9c w = dec.eigenvectors.adjoint() * psi;
    const double seg_end = seg_start + seg.dwell_ns;
    if (t_ns <= seg_end + 1e-9) {
      return dec.eigenvectors * phase_vector(dec.eigenvalues, t_ns - seg_start).cwiseProduct(w);
    }
    psi.noalias() = dec.eigenvectors * phase_vector(dec.eigenvalues, seg.dwell_ns).cwiseProduct(w);
    seg_start = seg_end;
  }
  throw_coverage(t_ns, seg_start);
}

std::vector<double> trajectory_ps_trace(const HopTrajectory& traj,
                                        const PairEvolutionCache& cache,
                                        std::span<const double> t_grid_ns) {
  validate_uniform_grid(t_grid_ns);
  std::vector<double> ps(t_grid_ns.size());
  trace_into(traj, cache, t_grid_ns, ps);
  return ps;
}

std::vector<double> trajectory_ps_trace(const HopTrajectory& traj, const CrystalParams& params,
                                        const FieldSpec& field,
                                        std::span<const double> t_grid_ns) {
  const PairEvolutionCache cache(params, field);
  return trajectory_ps_trace(traj, cache, t_grid_ns);
}

namespace {

// Trajectories are accumulated in fixed-size index blocks; block partial sums
// are then combined pairwise in block order. Both stages are independent of
// thread count and scheduling, which is what makes the ensemble bit-exact.
constexpr int kTrajPerBlock = 64;

struct BlockSums {
  std::vector<double> sum;
  std::vector<double> sumsq;
};

BlockSums accumulate_block(const PairEvolutionCache& cache, const MonteCarloParams& mc,
                           std::span<const double> grid, int traj_begin, int traj_end) {
  BlockSums block{std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0)};
  HopTrajectory traj;
  std::vector<double> ps(grid.size());
  for (int i = traj_begin; i < traj_end; ++i) {
    SplitMix64 rng = SplitMix64::stream(mc.master_seed, static_cast<std::uint64_t>(i));
    sample_trajectory(rng, mc, traj);
    trace_into(traj, cache, grid, ps);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      block.sum[k] += ps[k];
      block.sumsq[k] += ps[k] * ps[k];
    }
  }
  return block;
}

void add_into(BlockSums& into, const BlockSums& from) {
  for (std::size_t k = 0; k < into.sum.size(); ++k) {
    into.sum[k] += from.sum[k];
    into.sumsq[k] += from.sumsq[k];
  }
}

BeatTrace reduce_blocks(std::vector<BlockSums>& blocks, std::vector<double>&& grid,
                        const CrystalParams& params, const FieldSpec& field,
                        const MonteCarloParams& mc) {
  // Pairwise tree over block index.
  for (std::size_t width = 1; width < blocks.size(); width *= 2) {
    for (std::size_t i = 0; i + width < blocks.size(); i += 2 * width) {
      add_into(blocks[i], blocks[i + width]);
    }
  }

  const double n = static_cast<double>(mc.n_traj);
  BeatTrace trace;
  trace.t_ns = std::move(grid);
  trace.ps_mean.resize(trace.t_ns.size());
  trace.ps_stderr.resize(trace.t_ns.size());
  for (std::size_t k = 0; k < trace.t_ns.size(); ++k) {
    const double sum = blocks[0].sum[k];
    const double sumsq = blocks[0].sumsq[k];
    const double mean = sum / n;
    trace.ps_mean[k] = mean;
    if (mc.n_traj > 1) {
      const double var = std::max(0.0, (sumsq - sum * sum / n) / (n - 1.0));
      trace.ps_stderr[k] = std::sqrt(var / n);
    } else {
      trace.ps_stderr[k] = 0.0;
    }
  }
  trace.params = params;
  trace.field = field;
  trace.mc = mc;
  return trace;
}

}  // namespace

BeatTrace ensemble_beats(const CrystalParams& params, const FieldSpec& field,
                         const MonteCarloParams& mc) {
  mc.validate();
  const PairEvolutionCache cache(params, field);
  std::vector<double> grid = uniform_grid(mc.t_max_ns, mc.dt_ns);

  const int n_blocks = (mc.n_traj + kTrajPerBlock - 1) / kTrajPerBlock;
  std::vector<BlockSums> blocks(n_blocks);
#pragma omp parallel for schedule(dynamic)
  for (int b = 0; b < n_blocks; ++b) {
    const int begin = b * kTrajPerBlock;
    const int end = std::min(mc.n_traj, begin + kTrajPerBlock);
    blocks[b] = accumulate_block(cache, mc, grid, begin, end);
  }
  return reduce_blocks(blocks, std::move(grid), params, field, mc);
}

BeatTrace ensemble_beats_reference(const CrystalParams& params, const FieldSpec& field,
                                   const MonteCarloParams& mc) {
  mc.validate();
  const PairEvolutionCache cache(params, field);
  std::vector<double> grid = uniform_grid(mc.t_max_ns, mc.dt_ns);

  const int n_blocks = (mc.n_traj + kTrajPerBlock - 1) / kTrajPerBlock;
  std::vector<BlockSums> blocks(n_blocks);
  for (int b = 0; b < n_blocks; ++b) {
    const int begin = b * kTrajPerBlock;
    const int end = std::min(mc.n_traj, begin + kTrajPerBlock);
    blocks[b] = accumulate_block(cache, mc, grid, begin, end);
  }
  return reduce_blocks(blocks, std::move(grid), params, field, mc);
}

}  // namespace qbeat
