#pragma once

#include <array>

#include "levy/types.hpp"

namespace levy {

/// Default absolute tolerance (max-norm) for the u(N)/su(N) tag checks.
inline constexpr Real kLieTolerance = 1e-12;

enum class GroupTag { general, u, su };

template <class Derived>
bool is_anti_hermitian(const Eigen::MatrixBase<Derived>& x, Real tol = kLieTolerance) {
  if (x.rows() != x.cols()) return false;
  return max_norm(x + x.adjoint()) <= tol;
}

template <class Derived>
bool is_traceless(const Eigen::MatrixBase<Derived>& x, Real tol = kLieTolerance) {
  return std::abs(x.trace()) <= tol;
}

/// [X, Y] = XY - YX.
template <class DA, class DB>
Matrix commutator(const Eigen::MatrixBase<DA>& x, const Eigen::MatrixBase<DB>& y) {
  if (x.rows() != x.cols() || y.rows() != y.cols() || x.rows() != y.rows())
    throw InvalidInput("commutator: dimension mismatch");
  return x * y - y * x;
}

/// Orthogonal projection u(N) -> su(N), X - tr(X)/N I.  No tag check.
template <class Derived>
Matrix traceless_part(const Eigen::MatrixBase<Derived>& x) {
  const auto n = x.rows();
  Matrix out = x;
  out.diagonal().array() -= x.trace() / static_cast<Real>(n);
  return out;
}

/// pr_{su(N)}: rejects input that is not anti-Hermitian within `tol`.
Matrix project_su(const Matrix& x, Real tol = kLieTolerance);

/// Frobenius inner product Re tr(X^* Y).
template <class DA, class DB>
Real frobenius_inner(const Eigen::MatrixBase<DA>& x, const Eigen::MatrixBase<DB>& y) {
  return (x.adjoint() * y).trace().real();
}

/// An N x N complex matrix carrying a checked Lie-algebra tag.
class LieMatrix {
 public:
  LieMatrix(Matrix entries, GroupTag tag, Real tol = kLieTolerance);

  const Matrix& matrix() const { return entries_; }
  GroupTag tag() const { return tag_; }
  Eigen::Index dimension() const { return entries_.rows(); }

 private:
  Matrix entries_;
  GroupTag tag_;
};

LieMatrix commutator(const LieMatrix& x, const LieMatrix& y);
LieMatrix project_su(const LieMatrix& x, Real tol = kLieTolerance);

/// Pauli matrices sigma_1..sigma_3 (index 0..2).
Matrix pauli(int k);

/// i*sigma_k / 2, an orthogonal basis of su(2) with [t_a, t_b] = -eps_abc t_c.
Matrix su2_generator(int k);

/// Dirac matrices in the standard (Dirac) representation, metric diag(1,-1,-1,-1).
class GammaSet {
 public:
  GammaSet();

  const Matrix& upper(int mu) const { return upper_.at(static_cast<std::size_t>(mu)); }
  /// gamma_mu = eta_{mu nu} gamma^nu.
  const Matrix& lower(int mu) const { return lower_.at(static_cast<std::size_t>(mu)); }
  static Real eta(int mu) { return mu == 0 ? 1.0 : -1.0; }

 private:
  std::array<Matrix, 4> upper_;
  std::array<Matrix, 4> lower_;
};

/// Element of C^N (x) C^4, stored as an N x 4 block whose column alpha is psi_alpha.
class Spinor {
 public:
  Spinor() = default;
  explicit Spinor(Matrix block);
  static Spinor zero(Eigen::Index n) { return Spinor(Matrix::Zero(n, 4)); }

  const Matrix& block() const { return block_; }
  Matrix& block() { return block_; }
  Eigen::Index fiber() const { return block_.rows(); }
  auto component(int alpha) const { return block_.col(alpha); }
  Real norm() const { return block_.norm(); }

 private:
  Matrix block_;
};

/// (I_N (x) G) psi for a 4x4 matrix G acting on the spinor index.
inline Matrix act_on_spin(const Matrix& block, const Matrix& g) { return block * g.transpose(); }

/// psibar gamma_mu psi as an operator on C^N:  M xi = sum_a (xi, psi_a) ((I (x) g0 g_mu) psi)_a.
/// The matrix i*M is anti-Hermitian for every psi.
Matrix dirac_bilinear(const Spinor& psi, int mu, const GammaSet& gamma);

/// pr_{su(N)}(i psibar gamma_mu psi), the Yang-Mills source of the Dirac field (up to sign).
Matrix dirac_current(const Spinor& psi, int mu, const GammaSet& gamma);

/// Matrix exponential (Eigen's Pade scaling and squaring).
Matrix expm(const Matrix& x);

}  // namespace levy
