#pragma once

#include <array>
#include <span>
#include <vector>

#include "qbeat/spectral.hpp"
#include "qbeat/spin_hamiltonian.hpp"

namespace qbeat {

struct StationaryState {
  double energy_ghz = 0.0;
  double amplitude = 0.0;    // |<S|psi>|
  double probability = 0.0;  // |<S|psi>|^2
  int cluster = 0;           // index of the degenerate cluster this state belongs to
};

/// Energies and singlet projections of the nine stationary states, ascending
/// in energy. Within a degenerate cluster only the component of |S> inside
/// the subspace is observable; the cluster total is attributed to one
/// representative state and the rest of the cluster reports zero, which is
/// also how the projection-carrying direction of a degenerate pair is
/// conventionally quoted.
struct StationaryReport {
  std::array<StationaryState, 9> states;
  std::optional<PairConfiguration> configuration;
  CrystalParams params;
  FieldSpec field;

  double probability_sum() const;
};

StationaryReport stationary_report(const PairHamiltonian& h);
StationaryReport stationary_report(PairConfiguration config, const CrystalParams& params,
                                   const FieldSpec& field);

/// One analytic zero-field AB stationary state: the global-coordinate vector,
/// its energy formula value and the magnitude of its singlet amplitude.
struct AnalyticAbState {
  double energy_ghz = 0.0;
  Vec9c vector;
  double amplitude = 0.0;  // |<S|psi>|
};

/// The nine analytic zero-field stationary states of the AB configuration,
/// with energies {2(D/3+E), 2(D/3-E), -4D/3, -D/3-E (x2), -D/3+E (x2), 2D/3 (x2)}
/// and singlet amplitudes {1/sqrt3, cos2t/sqrt3, cos2t/sqrt3, sqrt(2/3) sin2t, 0 x5}.
std::array<AnalyticAbState, 9> table1_reference(const CrystalParams& params);

/// Signed coefficients of the pair singlet over the analytic AB stationary
/// states: (1/sqrt3, cos2t/sqrt3, cos2t/sqrt3, -sqrt2 sin2t/sqrt3, 0, ...).
std::array<double, 9> mixed_basis_singlet(const CrystalParams& params);

/// Stationary reports along a field-magnitude sweep in a fixed direction.
/// Eigenvalues are tracked by sorted order only.
std::vector<StationaryReport> projection_field_sweep(PairConfiguration config,
                                                     const CrystalParams& params,
                                                     const Vec3& direction,
                                                     std::span<const double> magnitudes_tesla);

}  // namespace qbeat
