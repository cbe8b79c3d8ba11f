#pragma once

#include <functional>
#include <memory>

#include "levy/geometry.hpp"
#include "levy/paths.hpp"

namespace levy {

struct TransportOptions {
  /// Largest tolerated max-norm of U_i^* U_i - I before transport is rejected.
  Real drift_bound = 1e-6;
  /// Below this drift U^{-1} is taken as U^*.
  Real adjoint_drift = 1e-8;
};

/// U_i = U^A_{t_i,0}(sigma) on the curve grid.
class TransportTable {
 public:
  TransportTable(std::vector<Matrix> u, Real drift, const TransportOptions& opts);

  int cells() const { return static_cast<int>(u_.size()) - 1; }
  const Matrix& at(int i) const { return u_.at(static_cast<std::size_t>(i)); }
  const Matrix& final() const { return u_.back(); }
  const Matrix& inverse(int i) const { return inv_.at(static_cast<std::size_t>(i)); }
  /// U_{t_i, t_j} = U_i U_j^{-1}, any order of i and j.
  Matrix between(int i, int j) const { return at(i) * inverse(j); }
  /// max_i |U_i^* U_i - I|
  Real drift() const { return drift_; }

 private:
  std::vector<Matrix> u_;
  std::vector<Matrix> inv_;
  Real drift_;
};

/// Classical RK4 per grid cell for dU/dt = -A_mu(sigma) sigma'^mu U, U(0) = I.
/// Throws NumericalError when the unitarity drift exceeds opts.drift_bound.
TransportTable parallel_transport(const Connection& a, const Curve& sigma, const TransportOptions& opts = {});

/// Body-frame fields along a curve, from which every derivative of U_{1,0} is assembled:
///   W_mu(t)      = U_t^{-1} F_{mu lam} sigma'^lam U_t
///   L_{mu nu}(t) = U_t^{-1} (-1/2)(nabla_mu F_{nu lam} + nabla_nu F_{mu lam}) sigma'^lam U_t
///   S_{mu nu}(t) = U_t^{-1} F_{mu nu} U_t
/// Velocity-dependent fields carry left and right values at every node.
struct BodyFrame {
  int dim = 0;
  int cells = 0;
  Matrix u_final;
  Matrix u_final_inv;
  /// A_mu(sigma(1))
  MatrixList a_end;
  /// [(i * d + mu) * 2 + side]
  MatrixList w;
  /// [((i * d + mu) * d + nu) * 2 + side]; empty for first-order data
  MatrixList l;
  /// [(i * d + mu) * d + nu]; empty for first-order data
  MatrixList s;

  const Matrix& w_at(int i, int mu, Side side) const {
    return w[static_cast<std::size_t>((i * dim + mu) * 2 + (side == Side::right))];
  }
  const Matrix& l_at(int i, int mu, int nu, Side side) const {
    return l[static_cast<std::size_t>(((i * dim + mu) * dim + nu) * 2 + (side == Side::right))];
  }
  const Matrix& s_at(int i, int mu, int nu) const { return s[static_cast<std::size_t>((i * dim + mu) * dim + nu)]; }
};

/// Sampled second-derivative kernels K^V, K^L, K^S of U_{1,0} (transport form) or the
/// kernels R^V, R^L, R^S of the derivative of B^A (one-form form).  K^V is kept in the
/// factorised form prefix * W_mu(t) W_nu(s) and expanded on demand.
class KernelTriple {
 public:
  enum class Form { transport, one_form };

  KernelTriple(std::shared_ptr<const BodyFrame> frame, Form form);

  Form form() const { return form_; }
  int dim() const { return frame_->dim; }
  int cells() const { return frame_->cells; }
  const BodyFrame& frame() const { return *frame_; }
  /// U_{1,0} for the transport form, I for the one-form form.
  const Matrix& prefix() const { return prefix_; }

  Matrix volterra(int mu, int nu, int i, int j) const;
  Matrix levy(int mu, int nu, int i, Side side = Side::right) const;
  Matrix singular(int mu, int nu, int i) const;

  /// The bilinear form of the decomposition evaluated on u, v (same grid).
  Matrix bilinear(const Variation& u, const Variation& v) const;

 private:
  std::shared_ptr<const BodyFrame> frame_;
  Form form_;
  Matrix prefix_;
};

/// Transport plus body-frame data along one curve.  order 1 supports first derivatives
/// and B^A; order 2 adds the second-derivative kernels.
class PathKernels {
 public:
  PathKernels(const Connection& a, const Curve& sigma, int order = 2, const TransportOptions& opts = {});

  const Curve& curve() const { return sigma_; }
  const TransportTable& table() const { return table_; }
  const BodyFrame& frame() const { return *frame_; }
  int dim() const { return frame_->dim; }
  int cells() const { return frame_->cells; }
  int order() const { return order_; }

  /// (U_{1,0})'(sigma) u.
  Matrix first_derivative(const Variation& u) const;
  /// B^A(sigma) u = U_{0,1} (U_{1,0})'(sigma) u.
  Matrix one_form(const Variation& u) const;
  /// -int_0^1 U_{0,t} F_{mu nu} u^mu sigma'^nu U_{t,0} dt, the E_0 form of B^A u.
  Matrix one_form_e0(const Variation& u) const;
  /// (U_{1,0})''(sigma)(u, v) for u, v in E_0.
  Matrix second_derivative(const Variation& u, const Variation& v) const;
  /// d_u (B^A(sigma) v) for u, v in E_0.
  Matrix one_form_derivative(const Variation& u, const Variation& v) const;

  KernelTriple kernels() const { return KernelTriple(frame_, KernelTriple::Form::transport); }
  KernelTriple one_form_kernels() const { return KernelTriple(frame_, KernelTriple::Form::one_form); }

 private:
  void require_second(const char* what) const;

  Connection a_;
  Curve sigma_;
  int order_;
  TransportTable table_;
  std::shared_ptr<BodyFrame> frame_;
};

/// (U_{1,0})'(sigma) u.
Matrix first_derivative(const Connection& a, const Curve& sigma, const Variation& u);

/// B^A(sigma) u.
Matrix one_form_B(const Connection& a, const Curve& sigma, const Variation& u);

/// B^A(sigma) u through the path 2-form h(sigma) = -U_{0,1} F(sigma(1)) U_{1,0}:
///   int_0^1 h(sigma^r)_{mu nu} sigma'^mu(r) u^nu(r) dr, each sigma^r transported afresh.
Matrix one_form_B_two_form(const Connection& a, const Curve& sigma, const Variation& u);

/// A curve functional with values in N x N matrices.
using CurveFunctional = std::function<Matrix(const Curve&)>;
/// A path-space 1-form (sigma, u) -> B(sigma) u.
using OneForm = std::function<Matrix(const Curve&, const Variation&)>;

OneForm transport_one_form(const Connection& a, const TransportOptions& opts = {});

struct FiniteDifference {
  Real eps = 1e-3;
  /// One Richardson pass (eps, eps / 2).
  bool richardson = true;
};

/// Central difference of Phi along u.
Matrix directional_derivative(const CurveFunctional& phi, const Curve& sigma, const Variation& u,
                              const FiniteDifference& fd = {});

/// Four-point central stencil for d^2 Phi / du dv.
Matrix mixed_derivative(const CurveFunctional& phi, const Curve& sigma, const Variation& u, const Variation& v,
                        const FiniteDifference& fd = {});

/// d_u B v - d_v B u + [B u, B v] with functional finite differences; u, v must lie in E_0.
Matrix closedness_residual(const OneForm& b, const Curve& sigma, const Variation& u, const Variation& v,
                           const FiniteDifference& fd = {});

}  // namespace levy
