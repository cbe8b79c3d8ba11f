#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>

#include "levy/types.hpp"

namespace levy {

/// Which one-sided limit a velocity refers to.  Kinks are only allowed at grid nodes.
enum class Side { left, right };

/// A map [0,1] -> R^d with one-sided derivatives.
struct PathFunction {
  int dim = 0;
  std::function<Vector(Real)> position;
  std::function<Vector(Real, Side)> velocity;
};

/// Curve or variation sampled on the uniform grid t_i = i / M.
///
/// The underlying path function is kept, so off-grid values (integrator midpoints,
/// restriction) are exact for analytic paths and monotone-cubic for sampled ones.
class GridPath {
 public:
  GridPath(PathFunction fn, int cells);

  int dim() const { return fn_.dim; }
  int cells() const { return cells_; }
  Real step() const { return 1.0 / cells_; }
  Real node(int i) const { return static_cast<Real>(i) / cells_; }

  const PathFunction& function() const { return fn_; }
  Vector position(Real t) const { return fn_.position(t); }
  Vector velocity(Real t, Side side = Side::right) const { return fn_.velocity(t, side); }

  /// Nodal samples, column i is node t_i.
  const RealMatrix& positions() const { return positions_; }
  const RealMatrix& velocities(Side side) const { return side == Side::left ? left_ : right_; }

 private:
  PathFunction fn_;
  int cells_;
  RealMatrix positions_;
  RealMatrix left_;
  RealMatrix right_;
};

/// A curve with sigma(0) = 0.
class Curve : public GridPath {
 public:
  Curve(PathFunction fn, int cells);
  /// Same path on another grid.
  Curve resampled(int cells) const { return Curve(function(), cells); }
};

/// A tangent direction u with u(0) = 0.  E_0 members have u(1) = 0 exactly.
class Variation : public GridPath {
 public:
  Variation(PathFunction fn, int cells);
  bool in_e0() const { return in_e0_; }
  Variation resampled(int cells) const { return Variation(function(), cells); }

 private:
  bool in_e0_;
};

/// Grid sizes must be powers of two, at least 16.
bool valid_cells(int cells);

/// sigma + eps u on sigma's grid.
Curve displaced(const Curve& sigma, const Variation& u, Real eps);
/// sigma + a u + b v.
Curve displaced(const Curve& sigma, const Variation& u, Real a, const Variation& v, Real b);

/// sigma^r(t) = sigma(r t), r in [0, 1].
Curve restrict(const Curve& sigma, Real r);

/// sqrt(2) sin(n pi t) p_mu, n >= 1.
Variation sin_basis(int n, int mu, int dim, int cells);
PathFunction sin_basis_function(int n, int mu, int dim);

/// f_1 = t, f_n = sqrt(2) sin(pi (n-1) t) / (pi (n-1)) along p_mu.
Variation f_basis(int n, int mu, int dim, int cells);
PathFunction f_basis_function(int n, int mu, int dim);

/// Scalar profile times a fixed direction vector.
PathFunction scaled_profile(const Vector& direction, std::function<Real(Real)> value,
                            std::function<Real(Real, Side)> slope);

/// u(t) = h max(0, k (t - 1 + 1/k)): a ramp of width 1/k ending at height h.
Variation needle(const Vector& h, int k, int cells);

/// Linear curve t v.
Curve linear_curve(const Vector& v, int cells);

struct RandomCurveSpec {
  enum class Kind { fourier, piecewise_linear };
  Kind kind = Kind::fourier;
  /// Fourier modes, or number of linear pieces (a power of two dividing cells / 2).
  int modes = 4;
  Real scale = 0.5;
  /// Drift b t is added when true.
  bool drift = true;
};

/// Coefficients of a Fourier curve sigma(t) = sum_k c_k sin(k pi t) + b t.
struct FourierCoefficients {
  RealMatrix c;  ///< column k-1 is c_k
  Vector b;
};

FourierCoefficients random_fourier_coefficients(std::uint64_t seed, int dim, int modes, Real scale, bool drift);
Curve fourier_curve(const FourierCoefficients& coeffs, int cells);
/// |sigma'|^2_{L^2} = |b|^2 + sum_k (k pi)^2 |c_k|^2 / 2.
Real fourier_velocity_norm2(const FourierCoefficients& coeffs);

Curve random_curve(std::uint64_t seed, const RandomCurveSpec& spec, int dim, int cells);

/// Monotone cubic (Fritsch-Carlson) interpolant of uniform samples; column i is t_i = i / M.
PathFunction pchip_path(const RealMatrix& samples);

/// CSV with header t,x0,..,x{d-1} and one row per node.
void write_curve_csv(const Curve& sigma, std::ostream& out);
Curve read_curve_csv(std::istream& in);

}  // namespace levy
