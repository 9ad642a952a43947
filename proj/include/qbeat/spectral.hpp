#pragma once

#include <utility>
#include <vector>

#include "qbeat/spin_hamiltonian.hpp"
#include "qbeat/types.hpp"

namespace qbeat {

/// Eigen-decomposition of a 9x9 pair Hamiltonian. Eigenvalues ascending;
/// eigenvectors are the matching columns. Within a degenerate cluster the
/// basis is arbitrary, so comparisons across implementations must use
/// subspace projectors rather than individual columns.
struct SpectralDecomposition {
  Vec9 eigenvalues;    // GHz, ascending
  Mat9c eigenvectors;  // orthonormal columns
  double degeneracy_tol = 1e-6;

  /// Half-open [begin,end) index runs of eigenvalues closer than degeneracy_tol.
  std::vector<std::pair<int, int>> clusters() const;
};

/// Diagonalize a pair Hamiltonian. Inputs whose hermiticity defect exceeds
/// hermiticity_tol (GHz) are rejected.
SpectralDecomposition decompose(const PairHamiltonian& h, double hermiticity_tol = 1e-9,
                                double degeneracy_tol = 1e-6);

SpectralDecomposition decompose(const Mat9c& h, double hermiticity_tol = 1e-9,
                                double degeneracy_tol = 1e-6);

}  // namespace qbeat
