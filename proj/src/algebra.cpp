#include "levy/algebra.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace levy {

Matrix project_su(const Matrix& x, Real tol) {
  if (!is_anti_hermitian(x, tol)) throw InvalidInput("project_su: input is not in u(N)");
  return traceless_part(x);
}

LieMatrix::LieMatrix(Matrix entries, GroupTag tag, Real tol) : entries_(std::move(entries)), tag_(tag) {
  if (entries_.rows() != entries_.cols()) throw InvalidInput("LieMatrix: matrix is not square");
  if (!entries_.allFinite()) throw InvalidInput("LieMatrix: non-finite entries");
  if (tag_ != GroupTag::general && !is_anti_hermitian(entries_, tol))
    throw InvalidInput("LieMatrix: u(N) tag requires an anti-Hermitian matrix");
  if (tag_ == GroupTag::su && !is_traceless(entries_, tol))
    throw InvalidInput("LieMatrix: su(N) tag requires a traceless matrix");
}

LieMatrix commutator(const LieMatrix& x, const LieMatrix& y) {
  GroupTag tag = GroupTag::general;
  if (x.tag() != GroupTag::general && y.tag() != GroupTag::general) tag = GroupTag::su;
  // [u(N), u(N)] lands in su(N); the check tolerance scales with the operands.
  const Real scale = 1.0 + max_norm(x.matrix()) * max_norm(y.matrix());
  return LieMatrix(commutator(x.matrix(), y.matrix()), tag, kLieTolerance * scale);
}

LieMatrix project_su(const LieMatrix& x, Real tol) {
  return LieMatrix(project_su(x.matrix(), tol), GroupTag::su, tol);
}

Matrix pauli(int k) {
  Matrix s = Matrix::Zero(2, 2);
  switch (k) {
    case 0:
      s(0, 1) = 1.0;
      s(1, 0) = 1.0;
      break;
    case 1:
      s(0, 1) = -kI;
      s(1, 0) = kI;
      break;
    case 2:
      s(0, 0) = 1.0;
      s(1, 1) = -1.0;
      break;
    default:
      throw InvalidInput("pauli: index must be 0, 1 or 2");
  }
  return s;
}

Matrix su2_generator(int k) { return 0.5 * kI * pauli(k); }

GammaSet::GammaSet() {
  const Matrix id2 = Matrix::Identity(2, 2);
  upper_[0] = Matrix::Zero(4, 4);
  upper_[0].topLeftCorner(2, 2) = id2;
  upper_[0].bottomRightCorner(2, 2) = -id2;
  for (int k = 1; k <= 3; ++k) {
    Matrix g = Matrix::Zero(4, 4);
    g.topRightCorner(2, 2) = pauli(k - 1);
    g.bottomLeftCorner(2, 2) = -pauli(k - 1);
    upper_[static_cast<std::size_t>(k)] = g;
  }
  for (int mu = 0; mu < 4; ++mu) lower_[static_cast<std::size_t>(mu)] = eta(mu) * upper(mu);

  // Every entry is in {0, +-1, +-i}; the Clifford relations hold exactly.
  const Matrix id4 = Matrix::Identity(4, 4);
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const Matrix anti = upper(mu) * upper(nu) + upper(nu) * upper(mu);
      const Matrix expected = (mu == nu ? 2.0 * eta(mu) : 0.0) * id4;
      if (anti != expected) throw std::logic_error("GammaSet: Clifford relation violated");
    }
  }
}

Spinor::Spinor(Matrix block) : block_(std::move(block)) {
  if (block_.cols() != 4) throw InvalidInput("Spinor: block must have 4 columns");
  if (!block_.allFinite()) throw InvalidInput("Spinor: non-finite entries");
}

Matrix dirac_bilinear(const Spinor& psi, int mu, const GammaSet& gamma) {
  if (mu < 0 || mu > 3) throw InvalidInput("dirac_bilinear: index out of range");
  const Matrix g0gmu = gamma.lower(0) * gamma.lower(mu);
  return act_on_spin(psi.block(), g0gmu) * psi.block().adjoint();
}

Matrix dirac_current(const Spinor& psi, int mu, const GammaSet& gamma) {
  return traceless_part(kI * dirac_bilinear(psi, mu, gamma));
}

Matrix expm(const Matrix& x) { return x.exp(); }

}  // namespace levy
