#pragma once

#include <algorithm>
#include <cmath>

#include "nlasim/common.hpp"
#include "nlasim/density_operator.hpp"

namespace nlasim {

// Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
// Both inputs must be normalized. Eigenvalues in (-tol::psd, 0) are rounding
// debris and are clamped to zero; anything more negative is a real error that
// the DensityOperator invariants should have caught earlier.
inline double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.basis() != sigma.basis())
    throw std::invalid_argument("fidelity: incompatible bases");
  if (std::abs(rho.trace() - 1.0) > tol::normalized ||
      std::abs(sigma.trace() - 1.0) > tol::normalized)
    throw std::invalid_argument("fidelity: inputs must be normalized");

  // A rank-one argument collapses the general formula to a plain overlap
  // Tr(rho sigma); taking that route skips the matrix square root, whose
  // clamped near-zero eigenvalues otherwise cost ~sqrt(eps) in accuracy.
  auto overlap = [](const DensityOperator& a, const DensityOperator& b) {
    return std::clamp((a.matrix() * b.matrix()).real().trace(), 0.0, 1.0);
  };
  if ((sigma.matrix() * sigma.matrix()).real().trace() >= 1.0 - 1e-12)
    return overlap(rho, sigma);
  if ((rho.matrix() * rho.matrix()).real().trace() >= 1.0 - 1e-12)
    return overlap(sigma, rho);

  Eigen::SelfAdjointEigenSolver<Matrix> es_rho(rho.matrix());
  Matrix sqrt_rho = es_rho.eigenvectors() *
                    es_rho.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                    es_rho.eigenvectors().adjoint();

  Matrix inner = sqrt_rho * sigma.matrix() * sqrt_rho;
  // inner is Hermitian PSD up to rounding; symmetrize before the solve.
  inner = ((inner + inner.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es_inner(inner, Eigen::EigenvaluesOnly);

  double root_sum = 0.0;
  for (int i = 0; i < es_inner.eigenvalues().size(); ++i) {
    const double l = es_inner.eigenvalues()(i);
    if (l < -tol::psd)
      throw NumericalError("fidelity: eigenvalue " + std::to_string(l) + " below PSD floor");
    root_sum += std::sqrt(std::max(l, 0.0));
  }
  return root_sum * root_sum;
}

inline double purity(const DensityOperator& rho) {
  return (rho.matrix() * rho.matrix()).real().trace();
}

struct SubspacePopulations {
  double vacuum = 0.0;
  double one_photon = 0.0;
  double two_photon = 0.0;  // total-photon-number == 2 sector
};

// Diagonal weight of the total-photon-number sectors 0, 1 and 2.
// Expects a normalized state; sectors above 2 are representable under larger
// cutoffs and simply do not contribute to the three reported numbers.
inline SubspacePopulations subspace_populations(const DensityOperator& rho) {
  if (std::abs(rho.trace() - 1.0) > tol::normalized)
    throw std::invalid_argument("subspace_populations: input must be normalized");
  SubspacePopulations pops;
  const FockBasis& basis = rho.basis();
  for (int i = 0; i < basis.dim(); ++i) {
    const double w = rho.matrix()(i, i).real();
    switch (basis.total_photons(i)) {
      case 0: pops.vacuum += w; break;
      case 1: pops.one_photon += w; break;
      case 2: pops.two_photon += w; break;
      default: break;
    }
  }
  return pops;
}

}  // namespace nlasim
