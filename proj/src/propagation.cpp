#include "qbeat/propagation.hpp"

#include <cmath>
#include <stdexcept>

#include "qbeat/constants.hpp"

namespace qbeat {

Propagator propagator(const PairHamiltonian& h, double dt_ns) {
  if (!(dt_ns >= 0.0)) {
    throw std::invalid_argument("propagator duration must be nonnegative");
  }
  Propagator u;
  u.generator = h;
  u.duration_ns = dt_ns;
  if (dt_ns == 0.0) {
    u.matrix = Mat9c::Identity();
    return u;
  }
  const SpectralDecomposition dec = decompose(h);
  Vec9c phases;
  for (int i = 0; i < 9; ++i) {
    phases(i) = std::polar(1.0, -constants::two_pi * dec.eigenvalues(i) * dt_ns);
  }
  u.matrix = dec.eigenvectors * phases.asDiagonal() * dec.eigenvectors.adjoint();
  return u;
}

double static_ps_at(const SpectralDecomposition& dec, double t_ns) {
  if (t_ns == 0.0) return 1.0;  // U(0) = I and |S> is a unit vector
  const Vec9c weights = dec.eigenvectors.adjoint() * singlet_state();
  Complex amp = 0.0;
  for (int i = 0; i < 9; ++i) {
    amp += std::norm(weights(i)) * std::polar(1.0, -constants::two_pi * dec.eigenvalues(i) * t_ns);
  }
  return std::norm(amp);
}

void validate_uniform_grid(std::span<const double> t_grid_ns) {
  if (t_grid_ns.empty()) throw std::invalid_argument("time grid must be non-empty");
  if (t_grid_ns[0] != 0.0) throw std::invalid_argument("time grid must start at 0");
  if (t_grid_ns.size() < 2) return;
  const double dt = t_grid_ns[1] - t_grid_ns[0];
  if (!(dt > 0.0)) throw std::invalid_argument("time grid must be ascending");
  for (std::size_t i = 1; i < t_grid_ns.size(); ++i) {
    const double step = t_grid_ns[i] - t_grid_ns[i - 1];
    if (std::abs(step - dt) > 1e-9 * std::max(1.0, dt)) {
      throw std::invalid_argument("time grid must be uniform");
    }
  }
}

std::vector<double> static_ps_trace(const SpectralDecomposition& dec,
                                    std::span<const double> t_grid_ns) {
  validate_uniform_grid(t_grid_ns);
  const Vec9c weights = dec.eigenvectors.adjoint() * singlet_state();
  Vec9 probs;
  for (int i = 0; i < 9; ++i) probs(i) = std::norm(weights(i));

  std::vector<double> ps(t_grid_ns.size());
  for (std::size_t k = 0; k < t_grid_ns.size(); ++k) {
    const double t = t_grid_ns[k];
    if (t == 0.0) {
      ps[k] = 1.0;
      continue;
    }
    Complex amp = 0.0;
    for (int i = 0; i < 9; ++i) {
      amp += probs(i) * std::polar(1.0, -constants::two_pi * dec.eigenvalues(i) * t);
    }
    ps[k] = std::norm(amp);
  }
  return ps;
}

std::vector<double> static_ps_trace(const PairHamiltonian& h, std::span<const double> t_grid_ns) {
  return static_ps_trace(decompose(h), t_grid_ns);
}

std::vector<double> uniform_grid(double t_max_ns, double dt_ns) {
  if (!(dt_ns > 0.0) || !(t_max_ns >= 0.0)) {
    throw std::invalid_argument("grid requires dt > 0 and t_max >= 0");
  }
  const auto n = static_cast<std::size_t>(std::llround(t_max_ns / dt_ns)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = static_cast<double>(i) * dt_ns;
  return grid;
}

}  // namespace qbeat
