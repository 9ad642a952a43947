#include "qbeat/stationary.hpp"

#include <cmath>

#include "qbeat/constants.hpp"

namespace qbeat {

double StationaryReport::probability_sum() const {
  double sum = 0.0;
  for (const auto& s : states) sum += s.probability;
  return sum;
}

StationaryReport stationary_report(const PairHamiltonian& h) {
  const SpectralDecomposition dec = decompose(h);
  const Vec9c singlet = singlet_state();

  StationaryReport report;
  report.configuration = h.configuration;
  report.field = h.field;

  for (int i = 0; i < 9; ++i) {
    report.states[i].energy_ghz = dec.eigenvalues(i);
  }

  const auto clusters = dec.clusters();
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto [begin, end] = clusters[c];
    // ||P_cluster |S>||^2; the in-cluster split is gauge so the total goes to
    // the representative (first) state of the cluster.
    double prob = 0.0;
    for (int i = begin; i < end; ++i) {
      report.states[i].cluster = static_cast<int>(c);
      prob += std::norm(dec.eigenvectors.col(i).dot(singlet));
    }
    report.states[begin].probability = prob;
    report.states[begin].amplitude = std::sqrt(prob);
  }
  return report;
}

StationaryReport stationary_report(PairConfiguration config, const CrystalParams& params,
                                   const FieldSpec& field) {
  StationaryReport report = stationary_report(total_hamiltonian(config, params, field));
  report.params = params;
  return report;
}

std::array<AnalyticAbState, 9> table1_reference(const CrystalParams& params) {
  params.validate();
  const double d = constants::ghz_from_cm1(params.d_cm1);
  const double e = constants::ghz_from_cm1(params.e_cm1);
  const double t = params.theta_deg * constants::pi / 180.0;
  const double c1 = std::cos(t);
  const double s1 = std::sin(t);
  const double c2 = std::cos(2.0 * t);
  const double s2 = std::sin(2.0 * t);
  const double r2 = 1.0 / std::sqrt(2.0);
  const double r3 = 1.0 / std::sqrt(3.0);

  // Product-basis indices, first factor = left exciton.
  enum { xx = 0, xy = 1, xz = 2, yx = 3, yy = 4, yz = 5, zx = 6, zy = 7, zz = 8 };

  std::array<AnalyticAbState, 9> psi;
  for (auto& p : psi) p.vector = Vec9c::Zero();

  psi[0].energy_ghz = 2.0 * (d / 3.0 + e);
  psi[0].vector(zz) = 1.0;
  psi[0].amplitude = r3;

  psi[1].energy_ghz = 2.0 * (d / 3.0 - e);
  psi[1].vector(xx) = -s1 * s1;
  psi[1].vector(yy) = c1 * c1;
  psi[1].vector(xy) = 0.5 * s2;
  psi[1].vector(yx) = -0.5 * s2;
  psi[1].amplitude = std::abs(c2) * r3;

  psi[2].energy_ghz = -4.0 * d / 3.0;
  psi[2].vector(xx) = c1 * c1;
  psi[2].vector(yy) = -s1 * s1;
  psi[2].vector(xy) = 0.5 * s2;
  psi[2].vector(yx) = -0.5 * s2;
  psi[2].amplitude = std::abs(c2) * r3;

  psi[3].energy_ghz = -d / 3.0 - e;
  psi[3].vector(xx) = -r2 * s2;
  psi[3].vector(yy) = -r2 * s2;
  psi[3].vector(xy) = r2 * c2;
  psi[3].vector(yx) = -r2 * c2;
  psi[3].amplitude = std::sqrt(2.0 / 3.0) * std::abs(s2);

  psi[4].energy_ghz = -d / 3.0 - e;
  psi[4].vector(xy) = r2;
  psi[4].vector(yx) = r2;

  psi[5].energy_ghz = -d / 3.0 + e;
  psi[5].vector(xz) = -r2 * c1;
  psi[5].vector(zx) = r2 * c1;
  psi[5].vector(yz) = r2 * s1;
  psi[5].vector(zy) = r2 * s1;

  psi[6].energy_ghz = -d / 3.0 + e;
  psi[6].vector(xz) = r2 * c1;
  psi[6].vector(zx) = r2 * c1;
  psi[6].vector(yz) = -r2 * s1;
  psi[6].vector(zy) = r2 * s1;

  psi[7].energy_ghz = 2.0 * d / 3.0;
  psi[7].vector(yz) = -r2 * c1;
  psi[7].vector(zy) = r2 * c1;
  psi[7].vector(xz) = -r2 * s1;
  psi[7].vector(zx) = -r2 * s1;

  psi[8].energy_ghz = 2.0 * d / 3.0;
  psi[8].vector(yz) = r2 * c1;
  psi[8].vector(zy) = r2 * c1;
  psi[8].vector(xz) = r2 * s1;
  psi[8].vector(zx) = -r2 * s1;

  return psi;
}

std::array<double, 9> mixed_basis_singlet(const CrystalParams& params) {
  params.validate();
  const double t = params.theta_deg * constants::pi / 180.0;
  const double r3 = 1.0 / std::sqrt(3.0);

  std::array<double, 9> coeff{};
  coeff[0] = r3;
  coeff[1] = std::cos(2.0 * t) * r3;
  coeff[2] = std::cos(2.0 * t) * r3;
  coeff[3] = -std::sqrt(2.0) * std::sin(2.0 * t) * r3;

  // Cross-check against the analytic state vectors: the coefficients are the
  // projections <psi_i|S> of the unit singlet, so they must reproduce it.
  const auto psi = table1_reference(params);
  const Vec9c singlet = singlet_state();
  for (int i = 0; i < 9; ++i) {
    const double projected = psi[i].vector.dot(singlet).real();
    if (std::abs(projected - coeff[i]) > 1e-12) {
      throw std::logic_error("mixed-basis singlet coefficients disagree with state projections");
    }
  }
  return coeff;
}

std::vector<StationaryReport> projection_field_sweep(PairConfiguration config,
                                                     const CrystalParams& params,
                                                     const Vec3& direction,
                                                     std::span<const double> magnitudes_tesla) {
  if (direction.norm() == 0.0) {
    throw ValidationError("field sweep direction must be a nonzero vector");
  }
  for (std::size_t i = 0; i < magnitudes_tesla.size(); ++i) {
    if (!(magnitudes_tesla[i] >= 0.0)) {
      throw ValidationError("field sweep magnitudes must be nonnegative");
    }
    if (i > 0 && magnitudes_tesla[i] < magnitudes_tesla[i - 1]) {
      throw ValidationError("field sweep magnitudes must be ascending");
    }
  }

  const Vec3 unit = direction.normalized();
  std::vector<StationaryReport> reports(magnitudes_tesla.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(magnitudes_tesla.size()); ++i) {
    reports[i] = stationary_report(config, params, FieldSpec{unit * magnitudes_tesla[i]});
  }
  return reports;
}

}  // namespace qbeat
