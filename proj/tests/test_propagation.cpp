#include <doctest.h>

#include <cmath>

#include "qbeat/constants.hpp"
#include "qbeat/propagation.hpp"
#include "qbeat/rng.hpp"

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

PairHamiltonian wrap(const Mat9c& m) {
  PairHamiltonian h;
  h.matrix = m;
  return h;
}

}  // namespace

TEST_CASE("propagator") {
  SUBCASE("zero duration gives the exact identity") {
    SplitMix64 rng(17);
    const Propagator u = propagator(wrap(random_hermitian(rng, 5.0)), 0.0);
    CHECK((u.matrix - Mat9c::Identity()).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("zero Hamiltonian gives the identity for any duration") {
    const Propagator u = propagator(wrap(Mat9c::Zero()), 3.7);
    CHECK((u.matrix - Mat9c::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("unitarity and the group property on random generators") {
    SplitMix64 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
      const PairHamiltonian h = wrap(random_hermitian(rng, 4.0));
      const double t1 = 2.0 * rng.uniform01();
      const double t2 = 2.0 * rng.uniform01();
      const Propagator u1 = propagator(h, t1);
      const Propagator u2 = propagator(h, t2);
      const Propagator u12 = propagator(h, t1 + t2);
      CHECK((u1.matrix.adjoint() * u1.matrix - Mat9c::Identity()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((u1.matrix * u2.matrix - u12.matrix).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("static singlet projection trace") {
  const CrystalParams rub = CrystalParams::rubrene();

  SUBCASE("grid validation") {
    const PairHamiltonian h = configuration_hamiltonian(PairConfiguration::AA, rub);
    const std::vector<double> not_from_zero = {1.0, 2.0};
    CHECK_THROWS_AS(static_ps_trace(h, not_from_zero), std::invalid_argument);
    const std::vector<double> non_uniform = {0.0, 1.0, 3.0};
    CHECK_THROWS_AS(static_ps_trace(h, non_uniform), std::invalid_argument);
  }

  SUBCASE("P_S(0) = 1 exactly and P_S stays in [0,1]") {
    SplitMix64 rng(31);
    const auto grid = uniform_grid(5.0, 0.01);
    for (int trial = 0; trial < 10; ++trial) {
      const auto ps = static_ps_trace(wrap(random_hermitian(rng, 3.0)), grid);
      CHECK(ps[0] == 1.0);
      for (const double p : ps) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0 + 1e-12);
      }
    }
  }

  SUBCASE("AA zero-field trace equals the three-cosine closed form") {
    // With equal projections 1/3 on levels (e1, e2, e3):
    // P(t) = 1/3 + (2/9) [cos w12 t + cos w13 t + cos w23 t].
    const auto dec = decompose(configuration_hamiltonian(PairConfiguration::AA, rub));
    const Vec9c weights = dec.eigenvectors.adjoint() * singlet_state();
    std::vector<double> levels;
    for (int i = 0; i < 9; ++i) {
      if (std::norm(weights(i)) > 1e-6) levels.push_back(dec.eigenvalues(i));
    }
    REQUIRE(levels.size() == 3);

    const auto grid = uniform_grid(4.0, 0.005);
    const auto ps = static_ps_trace(dec, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid[k];
      double expected = 1.0 / 3.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
          expected +=
              (2.0 / 9.0) * std::cos(constants::two_pi * (levels[i] - levels[j]) * t);
        }
      }
      CHECK(std::abs(ps[k] - expected) < 1e-12);
    }
  }

  SUBCASE("time-reversal symmetry at zero field") {
    const auto dec = decompose(configuration_hamiltonian(PairConfiguration::AB, rub));
    for (const double t : {0.123, 0.77, 2.5}) {
      CHECK(static_ps_at(dec, t) == doctest::Approx(static_ps_at(dec, -t)).epsilon(1e-12));
    }
  }

  SUBCASE("long-time average approaches the sum of fourth powers") {
    const auto dec = decompose(configuration_hamiltonian(PairConfiguration::AB, rub));
    const Vec9c weights = dec.eigenvectors.adjoint() * singlet_state();
    // Nondegenerate carriers plus the degenerate-cluster cross terms; for the
    // AB zero-field spectrum all carriers are nondegenerate, so the mean is
    // sum_i p_i^2.
    double expected = 0.0;
    for (int i = 0; i < 9; ++i) expected += std::norm(weights(i)) * std::norm(weights(i));
    const auto grid = uniform_grid(400.0, 0.005);
    const auto ps = static_ps_trace(dec, grid);
    double mean = 0.0;
    for (const double p : ps) mean += p;
    mean /= static_cast<double>(ps.size());
    CHECK(mean == doctest::Approx(expected).epsilon(1e-3));
  }
}
