#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace levy {

template <class Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <class Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <class Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

using Real = double;
using Complex = std::complex<double>;
using Matrix = CMatrix<double>;
using Vector = RVector<double>;
using RealMatrix = RMatrix<double>;

/// A list of N x N matrices indexed by one or more space-time indices.
using MatrixList = std::vector<Matrix>;

inline constexpr Complex kI{0.0, 1.0};

/// Thrown for malformed input: bad shapes, tags that do not hold, unknown names.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical procedure cannot reach its accuracy target
/// (integrator drift, a non-convergent series or extrapolation).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest absolute entry, the norm used for every tolerance in the library.
template <class Derived>
Real max_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

}  // namespace levy
