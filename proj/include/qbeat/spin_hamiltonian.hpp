#pragma once

#include <optional>

#include "qbeat/crystal.hpp"
#include "qbeat/types.hpp"

namespace qbeat {

/// Spin-1 operators in the zero-field basis {|x>,|y>,|z>}: (S_k)_{lm} = -i eps_{klm}.
struct SpinOperators {
  Mat3c sx, sy, sz;
};

SpinOperators spin_operators();

enum class SiteLabel { A, B };
enum class Frame { MainAxes, Global };

/// Single-triplet Hamiltonian, stored as E/h in GHz.
struct SiteHamiltonian {
  Mat3c matrix;
  SiteLabel site_label = SiteLabel::A;
  Frame frame = Frame::MainAxes;
};

/// Zero-field Hamiltonian in the main-axes frame of one site:
/// diag(-2D/3, D/3 - E, D/3 + E) converted from cm^-1 to GHz.
SiteHamiltonian site_hamiltonian(const CrystalParams& params);

/// Basis rotation about the shared z-axis. The handedness (x rotates towards
/// -y for positive angles) together with site A at +theta fixes the sign
/// conventions of the AB stationary states; see the stationary-analysis tests.
Mat3 rotation_about_z(double angle_deg);

/// R(angle) * H * R(angle)^T. Site A uses +theta, site B uses -theta.
SiteHamiltonian rotate_site_hamiltonian(const SiteHamiltonian& h, double angle_deg);

/// Site Hamiltonian of the given site expressed in the global frame.
SiteHamiltonian site_hamiltonian_global(SiteLabel site, const CrystalParams& params);

/// Single-site Zeeman Hamiltonian (g mu_B / h) S.B in GHz, global frame.
Mat3c zeeman_site_hamiltonian(const FieldSpec& field, const CrystalParams& params);

/// 9x9 pair Hamiltonian over the two-triplet product space, E/h in GHz.
/// configuration == nullopt means the fast-hopping configuration average.
struct PairHamiltonian {
  Mat9c matrix;
  std::optional<PairConfiguration> configuration;
  FieldSpec field;
};

/// H_con: H_A (x) I + I (x) H_B with the site Hamiltonians of the requested
/// configuration, both in the global frame.
PairHamiltonian configuration_hamiltonian(PairConfiguration config, const CrystalParams& params);

/// H_mag = H_Z (x) I + I (x) H_Z; the same H_Z applies to both sites.
PairHamiltonian zeeman_pair_hamiltonian(const FieldSpec& field, const CrystalParams& params);

/// H = H_con + H_mag.
PairHamiltonian total_hamiltonian(PairConfiguration config, const CrystalParams& params,
                                  const FieldSpec& field);

/// Fast-hopping effective Hamiltonian (H_AA + H_BB + 2 H_AB)/4 + H_mag,
/// averaged in the 9-dimensional pair space. Averaging the 3x3 site
/// Hamiltonians first and forming the pair Hamiltonian afterwards gives a
/// different (wrong) operator; see the tests.
PairHamiltonian averaged_hamiltonian(const CrystalParams& params, const FieldSpec& field);

/// The entangled pair singlet (|xx> + |yy> + |zz>)/sqrt(3).
Vec9c singlet_state();

/// max |H - H^dagger| over all elements.
double hermiticity_defect(const Mat9c& m);

}  // namespace qbeat
