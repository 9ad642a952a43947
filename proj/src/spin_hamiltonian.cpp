#include "qbeat/spin_hamiltonian.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "qbeat/constants.hpp"

namespace qbeat {

namespace {
constexpr Complex I{0.0, 1.0};

double deg_to_rad(double deg) { return deg * constants::pi / 180.0; }
}  // namespace

void CrystalParams::validate() const {
  if (!std::isfinite(d_cm1) || !std::isfinite(e_cm1)) {
    throw ValidationError("crystal parameters D, E must be finite");
  }
  if (!std::isfinite(theta_deg) || theta_deg <= -90.0 || theta_deg >= 90.0) {
    throw ValidationError("herringbone angle must lie in (-90, 90) degrees");
  }
  if (!std::isfinite(g) || g <= 0.0) {
    throw ValidationError("g-factor must be positive");
  }
}

void FieldSpec::validate() const {
  if (!b_tesla.allFinite()) {
    throw ValidationError("magnetic field components must be finite");
  }
}

std::string to_string(PairConfiguration c) {
  switch (c) {
    case PairConfiguration::AA: return "AA";
    case PairConfiguration::BB: return "BB";
    case PairConfiguration::AB: return "AB";
  }
  return "?";
}

PairConfiguration pair_configuration_from_string(const std::string& s) {
  if (s == "AA") return PairConfiguration::AA;
  if (s == "BB") return PairConfiguration::BB;
  if (s == "AB") return PairConfiguration::AB;
  throw ValidationError("unknown pair configuration '" + s + "' (expected AA, BB or AB)");
}

SpinOperators spin_operators() {
  SpinOperators s;
  s.sx = Mat3c::Zero();
  s.sy = Mat3c::Zero();
  s.sz = Mat3c::Zero();
  // (S_k)_{lm} = -i eps_{klm}
  s.sx(1, 2) = -I;
  s.sx(2, 1) = I;
  s.sy(2, 0) = -I;
  s.sy(0, 2) = I;
  s.sz(0, 1) = -I;
  s.sz(1, 0) = I;
  return s;
}

SiteHamiltonian site_hamiltonian(const CrystalParams& params) {
  params.validate();
  const double d = constants::ghz_from_cm1(params.d_cm1);
  const double e = constants::ghz_from_cm1(params.e_cm1);
  SiteHamiltonian h;
  h.matrix = Mat3c::Zero();
  h.matrix(0, 0) = -2.0 * d / 3.0;  // E_x
  h.matrix(1, 1) = d / 3.0 - e;     // E_y
  h.matrix(2, 2) = d / 3.0 + e;     // E_z
  h.frame = Frame::MainAxes;
  return h;
}

Mat3 rotation_about_z(double angle_deg) {
  const double a = deg_to_rad(angle_deg);
  const double c = std::cos(a);
  const double s = std::sin(a);
  Mat3 r;
  r << c, s, 0.0,
      -s, c, 0.0,
      0.0, 0.0, 1.0;
  return r;
}

SiteHamiltonian rotate_site_hamiltonian(const SiteHamiltonian& h, double angle_deg) {
  const Mat3 r = rotation_about_z(angle_deg);
  SiteHamiltonian out;
  out.matrix = r.cast<Complex>() * h.matrix * r.transpose().cast<Complex>();
  out.site_label = h.site_label;
  out.frame = Frame::Global;
  return out;
}

SiteHamiltonian site_hamiltonian_global(SiteLabel site, const CrystalParams& params) {
  SiteHamiltonian h = site_hamiltonian(params);
  h.site_label = site;
  const double angle = site == SiteLabel::A ? params.theta_deg : -params.theta_deg;
  return rotate_site_hamiltonian(h, angle);
}

Mat3c zeeman_site_hamiltonian(const FieldSpec& field, const CrystalParams& params) {
  field.validate();
  const SpinOperators s = spin_operators();
  const double scale = params.g * constants::bohr_magneton_ghz_per_tesla;
  return scale * (field.b_tesla.x() * s.sx + field.b_tesla.y() * s.sy +
                  field.b_tesla.z() * s.sz);
}

namespace {
Mat9c pair_from_sites(const Mat3c& left, const Mat3c& right) {
  const Mat3c id = Mat3c::Identity();
  return Eigen::kroneckerProduct(left, id) + Eigen::kroneckerProduct(id, right);
}
}  // namespace

PairHamiltonian configuration_hamiltonian(PairConfiguration config, const CrystalParams& params) {
  const Mat3c ha = site_hamiltonian_global(SiteLabel::A, params).matrix;
  const Mat3c hb = site_hamiltonian_global(SiteLabel::B, params).matrix;
  PairHamiltonian h;
  h.configuration = config;
  switch (config) {
    case PairConfiguration::AA: h.matrix = pair_from_sites(ha, ha); break;
    case PairConfiguration::BB: h.matrix = pair_from_sites(hb, hb); break;
    case PairConfiguration::AB: h.matrix = pair_from_sites(ha, hb); break;
  }
  return h;
}

PairHamiltonian zeeman_pair_hamiltonian(const FieldSpec& field, const CrystalParams& params) {
  const Mat3c hz = zeeman_site_hamiltonian(field, params);
  PairHamiltonian h;
  h.matrix = pair_from_sites(hz, hz);
  h.field = field;
  return h;
}

PairHamiltonian total_hamiltonian(PairConfiguration config, const CrystalParams& params,
                                  const FieldSpec& field) {
  PairHamiltonian h = configuration_hamiltonian(config, params);
  h.matrix += zeeman_pair_hamiltonian(field, params).matrix;
  h.field = field;
  return h;
}

PairHamiltonian averaged_hamiltonian(const CrystalParams& params, const FieldSpec& field) {
  PairHamiltonian h;
  h.configuration = std::nullopt;
  h.field = field;
  h.matrix = (configuration_hamiltonian(PairConfiguration::AA, params).matrix +
              configuration_hamiltonian(PairConfiguration::BB, params).matrix +
              2.0 * configuration_hamiltonian(PairConfiguration::AB, params).matrix) /
             4.0;
  h.matrix += zeeman_pair_hamiltonian(field, params).matrix;
  return h;
}

Vec9c singlet_state() {
  Vec9c s = Vec9c::Zero();
  const double a = 1.0 / std::sqrt(3.0);
  s(0) = a;  // |xx>
  s(4) = a;  // |yy>
  s(8) = a;  // |zz>
  return s;
}

double hermiticity_defect(const Mat9c& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace qbeat
