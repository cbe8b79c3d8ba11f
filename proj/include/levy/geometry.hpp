#pragma once

#include <functional>
#include <optional>

#include "levy/algebra.hpp"

namespace levy {

/// Diagonal metric on R^d: Euclidean delta or Minkowski eta = diag(1, -1, ..., -1).
class Metric {
 public:
  enum class Kind { euclidean, minkowski };

  Metric(Kind kind, int dim);
  static Metric euclidean(int dim) { return {Kind::euclidean, dim}; }
  static Metric minkowski(int dim) { return {Kind::minkowski, dim}; }

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  /// g^{mu mu} = g_{mu mu}; also the sigma_g^2 factor of the Cesaro trace.
  Real diag(int mu) const { return (kind_ == Kind::minkowski && mu > 0) ? -1.0 : 1.0; }
  std::string name() const { return kind_ == Kind::euclidean ? "euclidean" : "minkowski"; }

 private:
  Kind kind_;
  int dim_;
};

/// Index helpers for flattened partial-derivative lists.
///   first partials:  [lam * d + mu]               = d_lam X_mu
///   second partials: [(kap * d + lam) * d + mu]   = d_kap d_lam X_mu
inline std::size_t idx2(int a, int b, int d) { return static_cast<std::size_t>(a * d + b); }
inline std::size_t idx3(int a, int b, int c, int d) { return static_cast<std::size_t>((a * d + b) * d + c); }

/// A vector-valued smooth map R^d -> (N x N)^k with optional analytic partials and
/// centered finite-difference fallbacks.  Shared engine of connections and matter fields.
class SmoothMatrixField {
 public:
  using Fn = std::function<MatrixList(const Vector&)>;

  SmoothMatrixField() = default;
  SmoothMatrixField(int dim, int components, Fn value, Fn first = {}, Fn second = {});

  int dim() const { return dim_; }
  int components() const { return components_; }
  bool has_analytic_first() const { return static_cast<bool>(first_); }
  bool has_analytic_second() const { return static_cast<bool>(second_); }

  MatrixList value(const Vector& x) const { return value_(x); }
  /// [lam * k + c] = d_lam X_c
  MatrixList first(const Vector& x) const;
  /// [(kap * d + lam) * k + c] = d_kap d_lam X_c
  MatrixList second(const Vector& x) const;

  /// Centered differences with step 1e-4 (1 + |x|), one Richardson pass.
  MatrixList fd_first(const Vector& x) const;
  /// Centered differences of first() with step 1e-3 (1 + |x|), one Richardson pass.
  MatrixList fd_second(const Vector& x) const;

 private:
  int dim_ = 0;
  int components_ = 0;
  Fn value_;
  Fn first_;
  Fn second_;
};

/// Values and partials of a connection at one point.
struct ConnectionJet {
  int dim = 0;
  MatrixList a;   ///< A_mu
  MatrixList da;  ///< d_lam A_mu at idx2(lam, mu)
  MatrixList dda; ///< d_kap d_lam A_mu at idx3(kap, lam, mu)
};

/// Antisymmetric array F_{mu nu}, each entry computed once per unordered pair.
class Curvature {
 public:
  Curvature(int dim, Eigen::Index fiber);
  int dim() const { return dim_; }
  const Matrix& operator()(int mu, int nu) const { return f_[idx2(mu, nu, dim_)]; }
  void set(int mu, int nu, const Matrix& value);

 private:
  int dim_;
  MatrixList f_;
};

/// A u(N)- or su(N)-valued 1-form A_mu(x) dx^mu on R^d.
class Connection {
 public:
  using Fn = SmoothMatrixField::Fn;

  Connection(int dim, int fiber, Fn value, Fn first = {}, Fn second = {});

  int dim() const { return field_.dim(); }
  int fiber() const { return fiber_; }
  const SmoothMatrixField& field() const { return field_; }

  MatrixList values(const Vector& x) const { return field_.value(x); }
  MatrixList first_partials(const Vector& x) const { return field_.first(x); }
  MatrixList second_partials(const Vector& x) const { return field_.second(x); }

  /// order 0, 1 or 2.
  ConnectionJet jet(const Vector& x, int order) const;

  /// Checks the su(N) (or u(N) with `traceless == false`) tag of every component at x.
  bool in_algebra_at(const Vector& x, bool traceless = true, Real tol = kLieTolerance) const;

 private:
  int fiber_;
  SmoothMatrixField field_;
};

Curvature curvature(const ConnectionJet& jet);
Curvature curvature(const Connection& a, const Vector& x);

/// d_lam F_{mu nu} at idx3(lam, mu, nu); requires a second-order jet.
MatrixList curvature_partials(const ConnectionJet& jet);

/// nabla_lam F_{mu nu} = d_lam F_{mu nu} + [A_lam, F_{mu nu}] at idx3(lam, mu, nu).
MatrixList covariant_curvature(const ConnectionJet& jet, const Curvature& f);

/// g^{lam mu} nabla_lam F_{mu nu} for every nu.
MatrixList ym_divergence(const ConnectionJet& jet, const Metric& g);

/// g^{lam mu} nabla_lam F_{mu nu}(x) - j_nu(x).
Matrix ym_residual(const Connection& a, const Metric& g, const Vector& x, int nu,
                   const std::optional<MatrixList>& current = std::nullopt);

/// Constant gauge rotation A -> b^{-1} A b.
Connection gauge_rotate(const Connection& a, const Matrix& b);

/// Higgs (su(N)-valued) or Dirac (C^N (x) C^4, stored N x 4) field with partials.
class MatterField {
 public:
  enum class Kind { higgs, dirac };
  using Fn = std::function<Matrix(const Vector&)>;
  using ListFn = SmoothMatrixField::Fn;

  MatterField(Kind kind, int dim, int fiber, Fn value, ListFn first = {}, ListFn second = {});

  Kind kind() const { return kind_; }
  int dim() const { return field_.dim(); }
  int fiber() const { return fiber_; }
  const SmoothMatrixField& field() const { return field_; }

  Matrix value(const Vector& x) const { return field_.value(x).front(); }
  /// d_mu phi, index mu.
  MatrixList first_partials(const Vector& x) const { return field_.first(x); }
  /// d_kap d_lam phi at idx2(kap, lam).
  MatrixList second_partials(const Vector& x) const { return field_.second(x); }

 private:
  Kind kind_;
  int fiber_;
  SmoothMatrixField field_;
};

/// nabla_mu phi = d_mu phi + [A_mu, phi] for a Higgs field.
Matrix covariant_derivative(const Connection& a, const MatterField& phi, const Vector& x, int mu);

/// All nabla_mu phi at x (index mu).
MatrixList covariant_gradient(const ConnectionJet& jet, const MatterField& phi, const Vector& x);

/// nabla_mu nabla_nu phi at idx2(mu, nu); needs a jet of order >= 1.
MatrixList covariant_hessian(const ConnectionJet& jet, const MatterField& phi, const Vector& x);

}  // namespace levy
