#pragma once

#include <span>
#include <vector>

#include "qbeat/spectral.hpp"

namespace qbeat {

/// Exact unitary propagator of a constant pair Hamiltonian over a time step.
struct Propagator {
  Mat9c matrix;
  PairHamiltonian generator;
  double duration_ns = 0.0;
};

/// U = V exp(-i 2 pi lambda dt) V^dagger from the spectral decomposition;
/// exact for constant H, and exactly the identity for dt == 0.
Propagator propagator(const PairHamiltonian& h, double dt_ns);

/// P_S(t) = |sum_i |<S|psi_i>|^2 exp(-i 2 pi lambda_i t)|^2 at a single time.
double static_ps_at(const SpectralDecomposition& dec, double t_ns);

/// Static-Hamiltonian singlet projection trace on a uniform grid starting at 0.
std::vector<double> static_ps_trace(const PairHamiltonian& h, std::span<const double> t_grid_ns);
std::vector<double> static_ps_trace(const SpectralDecomposition& dec,
                                    std::span<const double> t_grid_ns);

/// Uniform grid {0, dt, 2 dt, ...} covering [0, t_max].
std::vector<double> uniform_grid(double t_max_ns, double dt_ns);

/// Throws unless the grid is uniform, ascending and starts at 0.
void validate_uniform_grid(std::span<const double> t_grid_ns);

}  // namespace qbeat
