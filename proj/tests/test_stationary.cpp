#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qbeat/constants.hpp"
#include "qbeat/rng.hpp"
#include "qbeat/stationary.hpp"

using namespace qbeat;

namespace {

Mat9c random_hermitian(SplitMix64& rng, double scale) {
  Mat9c m;
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      m(i, j) = Complex(rng.uniform01() - 0.5, rng.uniform01() - 0.5) * scale;
    }
  }
  return 0.5 * (m + m.adjoint()).eval();
}

/// States sorted by descending probability: (probability, energy) pairs.
std::vector<std::pair<double, double>> carriers(const StationaryReport& report,
                                                double min_prob = 1e-6) {
  std::vector<std::pair<double, double>> out;
  for (const auto& s : report.states) {
    if (s.probability > min_prob) out.emplace_back(s.probability, s.energy_ghz);
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace

TEST_CASE("decompose: basic properties") {
  SUBCASE("zero matrix") {
    PairHamiltonian h;
    h.matrix = Mat9c::Zero();
    const auto dec = decompose(h);
    CHECK(dec.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
    CHECK((dec.eigenvectors.adjoint() * dec.eigenvectors - Mat9c::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }

  SUBCASE("reconstruction residual on random Hermitian matrices") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
      const Mat9c m = random_hermitian(rng, 10.0);
      const auto dec = decompose(m);
      const Mat9c rebuilt =
          dec.eigenvectors * dec.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
          dec.eigenvectors.adjoint();
      CHECK((rebuilt - m).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((dec.eigenvectors.adjoint() * dec.eigenvectors - Mat9c::Identity())
                .cwiseAbs()
                .maxCoeff() < 1e-10);
    }
  }

  SUBCASE("non-Hermitian input is rejected") {
    PairHamiltonian h;
    h.matrix = Mat9c::Zero();
    h.matrix(0, 1) = 1.0;
    CHECK_THROWS_AS(decompose(h), std::invalid_argument);
  }

  SUBCASE("rubrene AA zero-field spectrum contains the published levels") {
    const auto dec =
        decompose(configuration_hamiltonian(PairConfiguration::AA, CrystalParams::rubrene()));
    for (const double expected : {-2.22, 0.87, 1.35}) {
      CHECK((dec.eigenvalues.array() - expected).abs().minCoeff() < 0.01);
    }
  }
}

TEST_CASE("stationary report: published projections") {
  const CrystalParams rub = CrystalParams::rubrene();

  SUBCASE("AA at zero field: three equal projections") {
    const auto report = stationary_report(PairConfiguration::AA, rub, FieldSpec{});
    const auto c = carriers(report);
    REQUIRE(c.size() == 3);
    for (const auto& [p, e] : c) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(report.probability_sum() == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("AB at zero field: four projections at the published energies") {
    const auto report = stationary_report(PairConfiguration::AB, rub, FieldSpec{});
    auto c = carriers(report, 1e-3);
    REQUIRE(c.size() == 4);
    // Match (probability, energy) against the published table rows.
    const std::vector<std::pair<double, double>> expected = {
        {0.52, -0.43}, {0.33, 0.87}, {0.07, 1.34}, {0.07, -2.21}};
    for (const auto& [p_exp, e_exp] : expected) {
      const bool found = std::any_of(c.begin(), c.end(), [&](const auto& pe) {
        return std::abs(pe.first - p_exp) < 0.01 && std::abs(pe.second - e_exp) < 0.01;
      });
      CHECK(found);
    }
  }

  SUBCASE("theta = 45 deg: antisymmetric state takes 2/3, psi2/psi3 vanish") {
    const CrystalParams perp{rub.d_cm1, rub.e_cm1, 45.0, rub.g};
    const auto report = stationary_report(PairConfiguration::AB, perp, FieldSpec{});
    const double d = perp.d_cm1 * constants::ghz_per_cm1;
    const double e = perp.e_cm1 * constants::ghz_per_cm1;
    for (const auto& s : report.states) {
      if (std::abs(s.energy_ghz - (-d / 3.0 - e)) < 1e-9 && s.probability > 0.0) {
        CHECK(s.probability == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
      }
      if (std::abs(s.energy_ghz - 2.0 * (d / 3.0 - e)) < 1e-9 ||
          std::abs(s.energy_ghz - (-4.0 * d / 3.0)) < 1e-9) {
        CHECK(s.probability < 1e-12);
      }
    }
  }

  SUBCASE("theta = 0: AB report equals AA report") {
    const CrystalParams flat{rub.d_cm1, rub.e_cm1, 0.0, rub.g};
    const auto aa = stationary_report(PairConfiguration::AA, flat, FieldSpec{});
    const auto ab = stationary_report(PairConfiguration::AB, flat, FieldSpec{});
    for (int i = 0; i < 9; ++i) {
      CHECK(aa.states[i].energy_ghz == doctest::Approx(ab.states[i].energy_ghz).epsilon(1e-9));
      CHECK(std::abs(aa.states[i].probability - ab.states[i].probability) < 1e-9);
    }
  }

  SUBCASE("projections always sum to one") {
    SplitMix64 rng(41);
    for (int trial = 0; trial < 25; ++trial) {
      const FieldSpec field{Vec3(rng.uniform01() - 0.5, rng.uniform01() - 0.5,
                                 rng.uniform01() - 0.5)};
      for (const auto config :
           {PairConfiguration::AA, PairConfiguration::BB, PairConfiguration::AB}) {
        const auto report = stationary_report(config, rub, field);
        CHECK(report.probability_sum() == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("analytic AB reference states") {
  const CrystalParams rub = CrystalParams::rubrene();
  const auto psi = table1_reference(rub);
  const Mat9c h = configuration_hamiltonian(PairConfiguration::AB, rub).matrix;
  const Vec9c singlet = singlet_state();

  SUBCASE("orthonormal set") {
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 9; ++j) {
        const double expected = i == j ? 1.0 : 0.0;
        CHECK(std::abs(psi[i].vector.dot(psi[j].vector) - Complex(expected)) < 1e-12);
      }
    }
  }

  SUBCASE("each is an eigenvector of the numeric AB Hamiltonian") {
    for (const auto& p : psi) {
      CHECK((h * p.vector - p.energy_ghz * p.vector).norm() < 1e-9);
    }
  }

  SUBCASE("singlet amplitudes match the closed forms") {
    const double two_theta = 2.0 * rub.theta_deg * constants::pi / 180.0;
    const std::array<double, 9> expected = {1.0 / std::sqrt(3.0),
                                            std::cos(two_theta) / std::sqrt(3.0),
                                            std::cos(two_theta) / std::sqrt(3.0),
                                            std::sqrt(2.0 / 3.0) * std::sin(two_theta),
                                            0.0,
                                            0.0,
                                            0.0,
                                            0.0,
                                            0.0};
    for (int i = 0; i < 9; ++i) {
      CHECK(std::abs(psi[i].amplitude - expected[i]) < 1e-10);
      CHECK(std::abs(std::abs(psi[i].vector.dot(singlet)) - expected[i]) < 1e-10);
    }
    CHECK(psi[3].amplitude == doctest::Approx(0.721).epsilon(1e-3));
    CHECK(psi[3].amplitude * psi[3].amplitude == doctest::Approx(0.520).epsilon(1e-3));
    CHECK(psi[1].amplitude == doctest::Approx(0.271).epsilon(2e-3));
    CHECK(psi[1].amplitude * psi[1].amplitude == doctest::Approx(0.073).epsilon(1e-2));
  }

  SUBCASE("degenerate-pair projectors agree with the numeric eigenbasis") {
    const auto dec = decompose(configuration_hamiltonian(PairConfiguration::AB, rub));
    for (const auto& pair : std::vector<std::pair<int, int>>{{3, 4}, {5, 6}, {7, 8}}) {
      const Mat9c analytic = psi[pair.first].vector * psi[pair.first].vector.adjoint() +
                             psi[pair.second].vector * psi[pair.second].vector.adjoint();
      // Find the numeric cluster at the same energy.
      Mat9c numeric = Mat9c::Zero();
      int members = 0;
      for (int i = 0; i < 9; ++i) {
        if (std::abs(dec.eigenvalues(i) - psi[pair.first].energy_ghz) < 1e-6) {
          numeric += dec.eigenvectors.col(i) * dec.eigenvectors.col(i).adjoint();
          ++members;
        }
      }
      CHECK(members == 2);
      CHECK((analytic - numeric).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("mixed-basis singlet coefficients") {
  const CrystalParams rub = CrystalParams::rubrene();

  SUBCASE("squares sum to one for any angle") {
    for (const double theta : {-60.0, -31.0, 0.0, 10.0, 31.0, 45.0, 80.0}) {
      const CrystalParams p{rub.d_cm1, rub.e_cm1, theta, rub.g};
      const auto coeff = mixed_basis_singlet(p);
      double sum = 0.0;
      for (const double c : coeff) sum += c * c;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  SUBCASE("theta = 0 gives equal thirds") {
    const CrystalParams flat{rub.d_cm1, rub.e_cm1, 0.0, rub.g};
    const auto coeff = mixed_basis_singlet(flat);
    for (int i = 0; i < 3; ++i) CHECK(coeff[i] == doctest::Approx(1.0 / std::sqrt(3.0)));
    for (int i = 3; i < 9; ++i) CHECK(std::abs(coeff[i]) < 1e-15);
  }

  SUBCASE("squared coefficients reproduce the report probabilities") {
    const auto coeff = mixed_basis_singlet(rub);
    const auto report = stationary_report(PairConfiguration::AB, rub, FieldSpec{});
    const auto c = carriers(report, 1e-3);
    REQUIRE(c.size() == 4);
    CHECK(coeff[3] * coeff[3] == doctest::Approx(c[0].first).epsilon(1e-9));   // 0.520
    CHECK(coeff[0] * coeff[0] == doctest::Approx(c[1].first).epsilon(1e-9));   // 1/3
    CHECK(coeff[1] * coeff[1] == doctest::Approx(c[2].first).epsilon(1e-9));   // 0.073
  }
}

TEST_CASE("projection field sweep") {
  const CrystalParams rub = CrystalParams::rubrene();

  SUBCASE("input validation") {
    const std::vector<double> descending = {0.5, 0.1};
    CHECK_THROWS_AS(
        projection_field_sweep(PairConfiguration::AB, rub, Vec3::UnitX(), descending),
        ValidationError);
    const std::vector<double> negative = {-0.1, 0.5};
    CHECK_THROWS_AS(projection_field_sweep(PairConfiguration::AB, rub, Vec3::UnitX(), negative),
                    ValidationError);
  }

  SUBCASE("zero-field endpoint matches the direct report") {
    const std::vector<double> mags = {0.0, 0.05, 1.0};
    for (const auto config : {PairConfiguration::AA, PairConfiguration::AB}) {
      const auto sweep = projection_field_sweep(config, rub, Vec3::UnitX(), mags);
      REQUIRE(sweep.size() == 3);
      const auto direct = stationary_report(config, rub, FieldSpec{});
      for (int i = 0; i < 9; ++i) {
        CHECK(sweep[0].states[i].energy_ghz ==
              doctest::Approx(direct.states[i].energy_ghz).epsilon(1e-12));
        CHECK(std::abs(sweep[0].states[i].probability - direct.states[i].probability) < 1e-12);
      }
    }
  }

  SUBCASE("high-field limit: two carriers at 2/3 and 1/3") {
    const std::vector<double> mags = {1.0, 2.0};
    for (const auto config : {PairConfiguration::AA, PairConfiguration::AB}) {
      const auto sweep = projection_field_sweep(config, rub, Vec3::UnitX(), mags);
      for (const auto& report : sweep) {
        const auto c = carriers(report, 0.02);
        REQUIRE(c.size() == 2);
        CHECK(c[0].first == doctest::Approx(2.0 / 3.0).epsilon(0.03));
        CHECK(c[1].first == doctest::Approx(1.0 / 3.0).epsilon(0.06));
      }
    }
  }

  SUBCASE("moderate fields recruit more carriers than zero field") {
    const std::vector<double> mags = {0.0, 0.03};
    const auto sweep = projection_field_sweep(PairConfiguration::AA, rub, Vec3::UnitX(), mags);
    CHECK(carriers(sweep[1], 0.01).size() > carriers(sweep[0], 0.01).size());
  }

  SUBCASE("|zz> is stationary at every field magnitude for B along z") {
    const std::vector<double> mags = {0.0, 0.1, 0.5, 2.0};
    for (const auto config :
         {PairConfiguration::AA, PairConfiguration::BB, PairConfiguration::AB}) {
      for (const double b : mags) {
        const Mat9c h = total_hamiltonian(config, rub, FieldSpec{Vec3(0.0, 0.0, b)}).matrix;
        Vec9c zz = Vec9c::Zero();
        zz(8) = 1.0;
        const Complex energy = zz.dot(h * zz);
        CHECK((h * zz - energy * zz).norm() < 1e-9);
      }
    }
  }
}
