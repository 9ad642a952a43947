#include "qbeat/spectral.hpp"

#include <sstream>

namespace qbeat {

std::vector<std::pair<int, int>> SpectralDecomposition::clusters() const {
  std::vector<std::pair<int, int>> out;
  int begin = 0;
  for (int i = 1; i <= 9; ++i) {
    if (i == 9 || eigenvalues(i) - eigenvalues(i - 1) > degeneracy_tol) {
      out.emplace_back(begin, i);
      begin = i;
    }
  }
  return out;
}

SpectralDecomposition decompose(const Mat9c& h, double hermiticity_tol, double degeneracy_tol) {
  const double defect = hermiticity_defect(h);
  if (defect > hermiticity_tol) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: max|H - H^dagger| = " << defect << " GHz exceeds tolerance "
        << hermiticity_tol;
    throw std::invalid_argument(msg.str());
  }

  // Symmetrize away round-off before solving.
  const Mat9c sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat9c> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed to converge");
  }

  SpectralDecomposition dec;
  dec.eigenvalues = solver.eigenvalues();
  dec.eigenvectors = solver.eigenvectors();
  dec.degeneracy_tol = degeneracy_tol;
  return dec;
}

SpectralDecomposition decompose(const PairHamiltonian& h, double hermiticity_tol,
                                double degeneracy_tol) {
  return decompose(h.matrix, hermiticity_tol, degeneracy_tol);
}

}  // namespace qbeat
