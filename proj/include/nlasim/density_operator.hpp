#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "nlasim/common.hpp"
#include "nlasim/fock_basis.hpp"

namespace nlasim {

// Density operator on a truncated multimode Fock basis.
//
// The trace is deliberately not pinned to 1: conditional (heralded) states
// carry their event probability in the trace, so probabilities compose by
// plain operator algebra. Construction enforces Hermiticity within
// tol::hermitian and trace in [0, 1 + tol], then stores the Hermitian part so
// rounding drift cannot accumulate across long pipelines. Positivity is a
// cubic-cost check and is exposed separately as validate_positive().
class DensityOperator {
 public:
  DensityOperator(FockBasis basis, Matrix matrix)
      : basis_(std::move(basis)), m_(std::move(matrix)) {
    if (m_.rows() != basis_.dim() || m_.cols() != basis_.dim())
      throw std::invalid_argument("DensityOperator: matrix does not match basis dimension");
    const double drift = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (drift > tol::hermitian)
      throw NumericalError("DensityOperator: Hermiticity drift " + std::to_string(drift));
    m_ = ((m_ + m_.adjoint()) / 2.0).eval();
    const double tr = m_.real().trace();
    if (tr < -tol::hermitian || tr > 1.0 + tol::hermitian)
      throw NumericalError("DensityOperator: trace " + std::to_string(tr) + " outside [0, 1]");
  }

  static DensityOperator vacuum(const FockBasis& basis) {
    Matrix m = Matrix::Zero(basis.dim(), basis.dim());
    m(0, 0) = 1.0;
    return DensityOperator(basis, std::move(m));
  }

  // |psi><psi| scaled by weight; amplitudes indexed in basis order.
  static DensityOperator from_pure(const FockBasis& basis, const Vector& amplitudes,
                                   double weight = 1.0) {
    if (amplitudes.size() != basis.dim())
      throw std::invalid_argument("from_pure: amplitude vector does not match basis");
    Matrix m = weight * (amplitudes * amplitudes.adjoint());
    return DensityOperator(basis, std::move(m));
  }

  const FockBasis& basis() const { return basis_; }
  const Matrix& matrix() const { return m_; }

  double trace() const { return m_.real().trace(); }

  DensityOperator normalized() const {
    const double tr = trace();
    if (tr <= 0.0)
      throw NumericalError("normalized: nonpositive trace " + std::to_string(tr));
    return DensityOperator(basis_, m_ / tr);
  }

  // Eigenvalue floor check; callers use it at pipeline boundaries, not per op.
  void validate_positive(double floor = -tol::psd) const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin < floor)
      throw NumericalError("DensityOperator: eigenvalue " + std::to_string(lmin) +
                           " below PSD floor");
  }

  DensityOperator operator+(const DensityOperator& other) const {
    if (basis_ != other.basis_)
      throw std::invalid_argument("DensityOperator+: incompatible bases");
    return DensityOperator(basis_, m_ + other.m_);
  }

 private:
  FockBasis basis_;
  Matrix m_;
};

// Kronecker-style product with re-truncation to the shared photon cutoff.
// Components whose combined total exceeds the cutoff are discarded; if the
// discarded probability mass exceeds trunc_tol the result is meaningless and
// a TruncationError is thrown instead.
inline DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b,
                                      double trunc_tol = tol::truncation) {
  const FockBasis& ba = a.basis();
  const FockBasis& bb = b.basis();
  if (ba.photon_cutoff() != bb.photon_cutoff())
    throw std::invalid_argument("tensor_product: operands use different photon cutoffs");
  const int modes = ba.num_modes() + bb.num_modes();
  if (modes > max_modes)
    throw std::invalid_argument("tensor_product: combined mode count exceeds " +
                                std::to_string(max_modes));

  FockBasis basis(modes, ba.photon_cutoff());
  Matrix m = Matrix::Zero(basis.dim(), basis.dim());
  std::vector<int> occ_r(modes), occ_c(modes);

  double discarded = 0.0;
  for (int ra = 0; ra < ba.dim(); ++ra)
    for (int rb = 0; rb < bb.dim(); ++rb) {
      const auto& oa = ba.occupation(ra);
      const auto& ob = bb.occupation(rb);
      std::copy(oa.begin(), oa.end(), occ_r.begin());
      std::copy(ob.begin(), ob.end(), occ_r.begin() + ba.num_modes());
      const int r = basis.index_of(occ_r);
      if (r < 0) {
        // Diagonal weight of a dropped row is exactly the discarded mass.
        discarded += std::abs(a.matrix()(ra, ra) * b.matrix()(rb, rb));
        continue;
      }
      for (int ca = 0; ca < ba.dim(); ++ca)
        for (int cb = 0; cb < bb.dim(); ++cb) {
          const complex_t v = a.matrix()(ra, ca) * b.matrix()(rb, cb);
          if (v == complex_t{0.0, 0.0}) continue;
          const auto& oca = ba.occupation(ca);
          const auto& ocb = bb.occupation(cb);
          std::copy(oca.begin(), oca.end(), occ_c.begin());
          std::copy(ocb.begin(), ocb.end(), occ_c.begin() + ba.num_modes());
          const int c = basis.index_of(occ_c);
          if (c >= 0) m(r, c) += v;
        }
    }

  if (discarded > trunc_tol)
    throw TruncationError("tensor_product: discarded mass " + std::to_string(discarded) +
                          " exceeds tolerance");
  return DensityOperator(basis, std::move(m));
}

// Trace out the listed modes (indices into the operand's mode order).
// Remaining modes keep their relative order and the photon cutoff.
inline DensityOperator partial_trace(const DensityOperator& rho,
                                     const std::vector<int>& modes_to_remove) {
  const FockBasis& basis = rho.basis();
  std::vector<bool> remove(basis.num_modes(), false);
  for (int m : modes_to_remove) {
    if (m < 0 || m >= basis.num_modes())
      throw std::invalid_argument("partial_trace: mode index out of range");
    if (remove[m]) throw std::invalid_argument("partial_trace: duplicate mode index");
    remove[m] = true;
  }
  const int kept = basis.num_modes() - int(modes_to_remove.size());
  if (kept == 0)
    throw std::invalid_argument("partial_trace: cannot remove every mode");

  FockBasis out_basis(kept, basis.photon_cutoff());
  Matrix m = Matrix::Zero(out_basis.dim(), out_basis.dim());
  std::vector<int> kr(kept), kc(kept);

  for (int r = 0; r < basis.dim(); ++r) {
    const auto& orr = basis.occupation(r);
    for (int c = 0; c < basis.dim(); ++c) {
      const complex_t v = rho.matrix()(r, c);
      if (v == complex_t{0.0, 0.0}) continue;
      const auto& occ = basis.occupation(c);
      bool diagonal_on_removed = true;
      int kpos = 0;
      for (int mm = 0; mm < basis.num_modes(); ++mm) {
        if (remove[mm]) {
          if (orr[mm] != occ[mm]) {
            diagonal_on_removed = false;
            break;
          }
        } else {
          kr[kpos] = orr[mm];
          kc[kpos] = occ[mm];
          ++kpos;
        }
      }
      if (!diagonal_on_removed) continue;
      m(out_basis.index_of(kr), out_basis.index_of(kc)) += v;
    }
  }
  return DensityOperator(out_basis, std::move(m));
}

}  // namespace nlasim
