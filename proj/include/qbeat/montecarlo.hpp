#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qbeat/propagation.hpp"
#include "qbeat/rng.hpp"
#include "qbeat/spectral.hpp"

namespace qbeat {

struct MonteCarloParams {
  double tau_hop_ns = 0.150;  // mean inter-site hopping time of one exciton
  int n_traj = 10000;
  double t_max_ns = 5.0;
  double dt_ns = 0.01;
  std::uint64_t master_seed = 12345;

  /// Mean dwell time of the pair in one configuration.
  double dwell_mean_ns() const { return 0.5 * tau_hop_ns; }

  void validate() const;

  bool operator==(const MonteCarloParams&) const = default;
};

struct HopSegment {
  PairConfiguration config;
  double dwell_ns;
};

/// One sampled random walk over pair configurations: segment 1 is same-type
/// (AA or BB, equal probability), segments alternate same-type <-> AB, and
/// each same-type segment redraws AA/BB independently. Dwells are i.i.d.
/// exponential with mean tau_hop/2; sampling stops once the cumulative dwell
/// reaches t_max.
struct HopTrajectory {
  std::vector<HopSegment> segments;

  double total_dwell_ns() const;
};

HopTrajectory sample_trajectory(SplitMix64& rng, const MonteCarloParams& mc);
void sample_trajectory(SplitMix64& rng, const MonteCarloParams& mc, HopTrajectory& out);

/// Spectral decompositions of the three configuration Hamiltonians at a fixed
/// field, plus the singlet expressed in each eigenbasis. Immutable after
/// construction; shared read-only by all trajectory evaluations.
class PairEvolutionCache {
 public:
  PairEvolutionCache(const CrystalParams& params, const FieldSpec& field);

  const SpectralDecomposition& dec(PairConfiguration c) const {
    return dec_[static_cast<int>(c)];
  }
  const Vec9c& singlet_in_eigenbasis(PairConfiguration c) const {
    return singlet_eig_[static_cast<int>(c)];
  }
  const CrystalParams& params() const { return params_; }
  const FieldSpec& field() const { return field_; }

 private:
  std::array<SpectralDecomposition, 3> dec_;
  std::array<Vec9c, 3> singlet_eig_;
  CrystalParams params_;
  FieldSpec field_;
};

/// Pair state at time t under one trajectory (product basis). t must not
/// exceed the trajectory coverage.
Vec9c evolve_state(const HopTrajectory& traj, const PairEvolutionCache& cache, double t_ns);

/// P_S(t) on a uniform grid for one trajectory: the cumulative unitary is
/// maintained at segment boundaries and grid points inside a segment are
/// evaluated in the eigenbasis of that segment's Hamiltonian.
std::vector<double> trajectory_ps_trace(const HopTrajectory& traj,
                                        const PairEvolutionCache& cache,
                                        std::span<const double> t_grid_ns);
std::vector<double> trajectory_ps_trace(const HopTrajectory& traj, const CrystalParams& params,
                                        const FieldSpec& field, std::span<const double> t_grid_ns);

/// Ensemble-averaged singlet projection trace with per-point standard errors.
struct BeatTrace {
  std::vector<double> t_ns;
  std::vector<double> ps_mean;
  std::vector<double> ps_stderr;
  CrystalParams params;
  FieldSpec field;
  MonteCarloParams mc;
};

/// OpenMP ensemble engine. Trajectory i draws from RNG stream
/// (master_seed, i); per-point sums are accumulated per fixed-size trajectory
/// block and blocks are combined pairwise in index order, so the result is
/// bit-identical for any thread count and any scheduling.
BeatTrace ensemble_beats(const CrystalParams& params, const FieldSpec& field,
                         const MonteCarloParams& mc);

/// Serial reference implementation: same reduction, no OpenMP. Produces
/// bit-identical output to ensemble_beats; kept as the correctness baseline
/// and benchmark counterpart.
BeatTrace ensemble_beats_reference(const CrystalParams& params, const FieldSpec& field,
                                   const MonteCarloParams& mc);

}  // namespace qbeat
