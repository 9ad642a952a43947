#pragma once

#include <stdexcept>
#include <string>

#include "qbeat/types.hpp"

namespace qbeat {

/// Thrown when user-supplied parameters or files violate a contract.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zero-field splitting constants, herringbone half-angle and g-factor of a
/// crystal with two inequivalent molecular orientations.
struct CrystalParams {
  double d_cm1 = 0.0;      // axial zero-field splitting, cm^-1
  double e_cm1 = 0.0;      // transverse zero-field splitting, cm^-1
  double theta_deg = 0.0;  // herringbone half-angle, degrees
  double g = 2.0;          // isotropic gyromagnetic factor

  static CrystalParams rubrene() { return {0.0555, -0.0040, 31.0, 2.0}; }

  void validate() const;

  bool operator==(const CrystalParams&) const = default;
};

/// Which inequivalent sites the two excitons of a pair occupy.
enum class PairConfiguration { AA, BB, AB };

inline bool is_same_type(PairConfiguration c) { return c != PairConfiguration::AB; }

std::string to_string(PairConfiguration c);
PairConfiguration pair_configuration_from_string(const std::string& s);

/// Static magnetic field, tesla, in the global coordinate frame (the z-axis
/// is shared by both sites).
struct FieldSpec {
  Vec3 b_tesla = Vec3::Zero();

  double magnitude() const { return b_tesla.norm(); }
  bool is_zero() const { return b_tesla.isZero(0.0); }

  void validate() const;

  bool operator==(const FieldSpec& other) const { return b_tesla == other.b_tesla; }
};

}  // namespace qbeat
