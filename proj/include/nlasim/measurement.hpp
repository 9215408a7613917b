#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nlasim/common.hpp"
#include "nlasim/density_operator.hpp"

namespace nlasim {

// Single-mode POVM element on the local space {|0>, ..., |cutoff>}.
// Elements must be Hermitian with spectrum in [-tol::psd, 1 + tol::psd];
// a full detector outcome set additionally sums to the identity, which
// devices-level constructors guarantee.
struct PovmElement {
  std::string label;
  Matrix matrix;  // (cutoff+1) x (cutoff+1)

  PovmElement(std::string lbl, Matrix m) : label(std::move(lbl)), matrix(std::move(m)) {
    if (matrix.rows() != matrix.cols() || matrix.rows() < 1)
      throw std::invalid_argument("PovmElement: matrix must be square");
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > tol::hermitian)
      throw std::invalid_argument("PovmElement '" + label + "': not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol::psd)
      throw std::invalid_argument("PovmElement '" + label + "': negative eigenvalue");
    if (es.eigenvalues().maxCoeff() > 1.0 + tol::psd)
      throw std::invalid_argument("PovmElement '" + label + "': eigenvalue above 1");
  }

  int local_dim() const { return int(matrix.rows()); }
};

// Measure one mode with a single POVM element.
//
// Returns the outcome probability Tr(E rho) and the unnormalized conditional
// state sqrt(E) rho sqrt(E) with the measured mode traced out afterwards; its
// trace equals the probability, so heralded branches compose by addition.
inline std::pair<double, DensityOperator> measure_povm(const DensityOperator& rho, int mode,
                                                       const PovmElement& element) {
  const FockBasis& basis = rho.basis();
  if (mode < 0 || mode >= basis.num_modes())
    throw std::invalid_argument("measure_povm: mode index out of range");
  if (element.local_dim() != basis.photon_cutoff() + 1)
    throw std::invalid_argument("measure_povm: element dimension does not match local space");

  // sqrt(E) on the local space, eigenvalues clamped at zero within tolerance.
  Eigen::SelfAdjointEigenSolver<Matrix> es(element.matrix);
  Matrix sqrt_local = es.eigenvectors() *
                      es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                      es.eigenvectors().adjoint();

  Matrix s = Matrix::Zero(basis.dim(), basis.dim());
  for (int r = 0; r < basis.dim(); ++r) {
    const auto& orr = basis.occupation(r);
    for (int c = 0; c < basis.dim(); ++c) {
      const auto& occ = basis.occupation(c);
      bool same_elsewhere = true;
      for (int m = 0; m < basis.num_modes(); ++m)
        if (m != mode && orr[m] != occ[m]) {
          same_elsewhere = false;
          break;
        }
      if (same_elsewhere) s(r, c) = sqrt_local(orr[mode], occ[mode]);
    }
  }

  Matrix conditional = s * rho.matrix() * s.adjoint();
  const double probability = conditional.real().trace();
  if (probability < -tol::psd)
    throw NumericalError("measure_povm: probability " + std::to_string(probability) +
                         " below zero; POVM element or state is broken");
  DensityOperator cond(basis, std::move(conditional));
  return {std::max(probability, 0.0), partial_trace(cond, {mode})};
}

// Measure several modes jointly with one diagonal (photon-number) outcome
// weight. diag_weight receives the occupations of `modes` in the given order
// and must return a value in [0, 1]. The measured modes are traced out.
// Used for detectors that watch more than one physical mode at once.
inline std::pair<double, DensityOperator> measure_diagonal(
    const DensityOperator& rho, const std::vector<int>& modes,
    const std::function<double(const std::vector<int>&)>& diag_weight) {
  const FockBasis& basis = rho.basis();
  for (int m : modes)
    if (m < 0 || m >= basis.num_modes())
      throw std::invalid_argument("measure_diagonal: mode index out of range");
  if (modes.empty()) throw std::invalid_argument("measure_diagonal: no modes given");

  // Diagonal element: sqrt acts entrywise on the weights.
  std::vector<double> sqrt_w(basis.dim());
  std::vector<int> local(modes.size());
  for (int i = 0; i < basis.dim(); ++i) {
    const auto& occ = basis.occupation(i);
    for (std::size_t k = 0; k < modes.size(); ++k) local[k] = occ[modes[k]];
    const double w = diag_weight(local);
    if (w < -tol::psd || w > 1.0 + tol::psd)
      throw std::invalid_argument("measure_diagonal: weight outside [0, 1]");
    sqrt_w[i] = std::sqrt(std::max(w, 0.0));
  }

  Matrix conditional = rho.matrix();
  for (int r = 0; r < basis.dim(); ++r)
    for (int c = 0; c < basis.dim(); ++c) conditional(r, c) *= sqrt_w[r] * sqrt_w[c];

  DensityOperator cond(basis, std::move(conditional));
  return {cond.trace(), partial_trace(cond, modes)};
}

}  // namespace nlasim
