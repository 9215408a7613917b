#pragma once

#include <cmath>
#include <vector>

#include "nlasim/common.hpp"
#include "nlasim/density_operator.hpp"

namespace nlasim {

// Completely positive map given by Kraus operators on a fixed basis.
// Trace-preserving channels (loss, beam splitter, phase shift) satisfy
// sum_k K_k^dag K_k = I; check_complete verifies that within tolerance.
struct KrausChannel {
  FockBasis basis;
  std::vector<Matrix> operators;

  void check_complete(double tolerance = tol::hermitian) const {
    Matrix s = Matrix::Zero(basis.dim(), basis.dim());
    for (const Matrix& k : operators) s += k.adjoint() * k;
    const double err = (s - Matrix::Identity(basis.dim(), basis.dim())).cwiseAbs().maxCoeff();
    if (err > tolerance)
      throw NumericalError("KrausChannel: completeness violated by " + std::to_string(err));
  }

  DensityOperator apply(const DensityOperator& rho) const {
    if (rho.basis() != basis)
      throw std::invalid_argument("KrausChannel: basis mismatch");
    Matrix out = Matrix::Zero(basis.dim(), basis.dim());
    for (const Matrix& k : operators) out += k * rho.matrix() * k.adjoint();
    return DensityOperator(basis, std::move(out));
  }
};

// Pure photon loss on one mode, transmissivity eta in [0, 1].
// Kraus operators move k photons into an unobserved environment:
//   <n-k| K_k |n> = sqrt(C(n,k) eta^(n-k) (1-eta)^k).
// Composition law: loss(eta1) then loss(eta2) equals loss(eta1*eta2).
inline KrausChannel loss_channel(const FockBasis& basis, int mode, double eta) {
  if (mode < 0 || mode >= basis.num_modes())
    throw std::invalid_argument("loss_channel: mode index out of range");
  if (eta < 0.0 || eta > 1.0)
    throw std::invalid_argument("loss_channel: transmissivity must be in [0, 1]");

  KrausChannel ch{basis, {}};
  const int nmax = basis.photon_cutoff();
  for (int k = 0; k <= nmax; ++k) {
    Matrix kk = Matrix::Zero(basis.dim(), basis.dim());
    bool nonzero = false;
    for (int c = 0; c < basis.dim(); ++c) {
      const auto& occ = basis.occupation(c);
      const int n = occ[mode];
      if (n < k) continue;
      std::vector<int> target = occ;
      target[mode] = n - k;
      const int r = basis.index_of(target);
      kk(r, c) = std::sqrt(binomial(n, k) * std::pow(eta, n - k) * std::pow(1.0 - eta, k));
      nonzero = true;
    }
    if (nonzero) ch.operators.push_back(std::move(kk));
  }
  return ch;
}

// Two-mode beam splitter, fixed phase convention:
//   a_i^dag -> sqrt(t) a_i^dag + sqrt(1-t) a_j^dag
//   a_j^dag -> sqrt(t) a_j^dag - sqrt(1-t) a_i^dag
// Photon-number preserving, so the unitary is block diagonal over total-photon
// sectors of the truncated basis and no mass crosses the cutoff.
inline KrausChannel beam_splitter_channel(const FockBasis& basis, int mode_i, int mode_j,
                                          double transmissivity) {
  if (mode_i < 0 || mode_i >= basis.num_modes() || mode_j < 0 || mode_j >= basis.num_modes() ||
      mode_i == mode_j)
    throw std::invalid_argument("beam_splitter_channel: bad mode pair");
  if (transmissivity < 0.0 || transmissivity > 1.0)
    throw std::invalid_argument("beam_splitter_channel: transmissivity must be in [0, 1]");

  const double st = std::sqrt(transmissivity);
  const double sr = std::sqrt(1.0 - transmissivity);
  const int nmax = basis.photon_cutoff();

  // Factorials up to the cutoff for the bosonic normalization factors.
  std::vector<double> fact(nmax + 1, 1.0);
  for (int n = 1; n <= nmax; ++n) fact[n] = fact[n - 1] * n;

  Matrix u = Matrix::Zero(basis.dim(), basis.dim());
  for (int c = 0; c < basis.dim(); ++c) {
    const auto& occ = basis.occupation(c);
    const int ni = occ[mode_i];
    const int nj = occ[mode_j];
    // Binomial expansion of (st a_i + sr a_j)^ni (st a_j - sr a_i)^nj |vac>.
    for (int k = 0; k <= ni; ++k)
      for (int l = 0; l <= nj; ++l) {
        const int pi = k + (nj - l);        // photons ending in mode i
        const int pj = (ni - k) + l;        // photons ending in mode j
        std::vector<int> target = occ;
        target[mode_i] = pi;
        target[mode_j] = pj;
        const int r = basis.index_of(target);
        const double amp = binomial(ni, k) * binomial(nj, l) *
                           std::pow(st, k + l) * std::pow(sr, (ni - k) + (nj - l)) *
                           ((nj - l) % 2 == 0 ? 1.0 : -1.0) *
                           std::sqrt(fact[pi] * fact[pj] / (fact[ni] * fact[nj]));
        u(r, c) += amp;
      }
  }
  return KrausChannel{basis, {std::move(u)}};
}

// Phase shift phi on one mode: |n> -> exp(i phi n) |n>.
inline KrausChannel phase_shift_channel(const FockBasis& basis, int mode, double phi) {
  if (mode < 0 || mode >= basis.num_modes())
    throw std::invalid_argument("phase_shift_channel: mode index out of range");
  Matrix u = Matrix::Zero(basis.dim(), basis.dim());
  for (int i = 0; i < basis.dim(); ++i)
    u(i, i) = std::exp(complex_t{0.0, phi * basis.occupation(i)[mode]});
  return KrausChannel{basis, {std::move(u)}};
}

inline DensityOperator apply_loss(const DensityOperator& rho, int mode, double eta) {
  return loss_channel(rho.basis(), mode, eta).apply(rho);
}

inline DensityOperator apply_beam_splitter(const DensityOperator& rho, int mode_i, int mode_j,
                                           double transmissivity) {
  return beam_splitter_channel(rho.basis(), mode_i, mode_j, transmissivity).apply(rho);
}

inline DensityOperator apply_phase_shift(const DensityOperator& rho, int mode, double phi) {
  return phase_shift_channel(rho.basis(), mode, phi).apply(rho);
}

}  // namespace nlasim
